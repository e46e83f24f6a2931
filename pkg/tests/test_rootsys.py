from __future__ import annotations

import pytest

from wmin.rootsys import EXPECTED, RootSystemError, nat_orbit, root_system, to_dominant

TYPES = ["D4", "E6", "E7", "E8"]


@pytest.mark.parametrize("typ", TYPES)
def test_sizes_and_b(typ):
    R = root_system(typ)
    npos, nnat, b = EXPECTED[typ]
    assert len(R.positive) == npos
    assert len(R.nat_positive) == nnat
    assert R.b == b


def test_positive_root_counts():
    assert [len(root_system(t).positive) for t in TYPES] == [12, 36, 63, 120]
    assert [root_system(t).b for t in TYPES] == [4, 9, 14, 24]
    assert root_system("D4").a == 2


@pytest.mark.parametrize("typ", TYPES)
def test_theta_and_rho(typ):
    R = root_system(typ)
    assert R.form(R.theta, R.theta) == 2
    assert R.rho_pair(R.theta) == R.h_dual - 1
    # rho pairs to 1 with every simple root
    assert all(R.form(R.rho, R.simple(i)) == 1 for i in range(R.rank))


@pytest.mark.parametrize("typ", TYPES)
def test_alpha_chain(typ):
    R = root_system(typ)
    assert R.rho_pair(R.alpha_chain) == R.h_dual - R.a
    assert R.alpha_chain in R.positive


@pytest.mark.parametrize("typ", ["D4", "E6", "E7"])
def test_coset_words(typ):
    R = root_system(typ)
    words = R.coset_words
    assert len(words) == 2 * len(R.positive)
    for eta, word in words.items():
        assert R.apply_word(word, R.theta) == eta
        if min(eta) >= 0:
            # length of the minimal coset representative
            wbar = tuple(reversed(word))
            w_rho = R.apply_word(wbar, R.rho)
            assert len(word) == R.form([a - b for a, b in zip(R.rho, w_rho)], R.theta)


def test_centralizer_types():
    # D4 -> A1^3, E6 -> A5, E7 -> D6, E8 -> E7
    assert [len(root_system(t).nat_simple) for t in TYPES] == [3, 5, 6, 7]


def test_nat_orbit_and_dominant():
    R = root_system("E6")
    orb = nat_orbit(R.nat_cartan, (1,) * 5)
    assert len(orb) == 720
    for v, det in orb[:50]:
        dom, s = to_dominant(R.nat_cartan, v)
        assert dom == (1,) * 5 and s == det
    assert to_dominant(R.nat_cartan, (0, 1, 1, 1, 1))[1] == 0


def test_unknown_type():
    with pytest.raises(RootSystemError):
        root_system("A3")
