import math

import pytest

from errors import BudgetExceededError, MvfError, ParameterError
from model.fixtures import load_mvf, mvf_dumps, mvf_loads, save_mvf
from model.mvf import (
    MvFamily,
    canonical_set,
    crt,
    crt_split,
    mvf_bruteforce,
    mvf_grolmusz,
    mvf_validate,
)

S6 = (0, 1, 3, 4)


# ----------------------------------------------------------------------------
# Canonical sets and CRT
# ----------------------------------------------------------------------------

@pytest.mark.parametrize(
    "m, expected",
    [
        (7, (0, 1)),
        (6, (0, 1, 3, 4)),
        (12, (0, 1, 4, 9)),
        (511, (0, 1, 147, 365)),
    ],
)
def test_canonical_set(m, expected):
    S = canonical_set(m)
    assert S.elements == expected
    assert S.nonzero == expected[1:]
    assert len(S) == len(expected)


def test_canonical_set_size_is_power_of_two():
    assert len(canonical_set(1022)) == 8
    assert len(canonical_set(30)) == 8


def test_canonical_set_rejects_small_modulus():
    with pytest.raises(ParameterError):
        canonical_set(1)


def test_crt():
    assert crt(3, 2, 1, 0) == 4
    assert crt(3, 2, 0, 0) == 0
    assert crt_split(4, 3, 2) == (1, 0)
    assert {crt(3, 2, a, b) for a in (0, 1) for b in (0, 1)} == set(canonical_set(6))


def test_canonical_set_of_product_is_crt_image():
    limit = 10**4
    sets = {x: set(canonical_set(x)) for x in range(2, limit + 1)}
    for m in range(2, limit // 2 + 1):
        for p in range(2, limit // m + 1):
            if math.gcd(m, p) != 1:
                continue
            S = sets[m * p]
            assert len(S) == len(sets[m]) * len(sets[p])
            for s in S:
                s_m, s_p = crt_split(s, m, p)
                assert s_m in sets[m] and s_p in sets[p]


def test_crt_split_inverts_crt():
    for x in range(1022):
        assert crt(511, 2, *crt_split(x, 511, 2)) == x


# ----------------------------------------------------------------------------
# Families and validation
# ----------------------------------------------------------------------------

def test_toy_family_is_valid(toy_family):
    assert mvf_validate(toy_family) is None
    assert [toy_family.inner(i, j) for i in range(2) for j in range(2)] == [0, 1, 1, 0]


def test_single_zero_pair_is_valid():
    assert mvf_validate(MvFamily(6, S6, ((0,),), ((0,),))) is None


def test_violation_is_reported_row_major():
    fam = MvFamily(6, S6, ((1, 0), (0, 1)), ((0, 1), (0, 1)))
    violation = mvf_validate(fam)
    assert (violation.i, violation.j, violation.value) == (1, 2, 0)
    assert "expected a nonzero element of S" in violation.reason


def test_diagonal_violation():
    fam = MvFamily(6, S6, ((1, 1),), ((1, 0),))
    violation = mvf_validate(fam)
    assert (violation.i, violation.j) == (1, 1)
    assert violation.reason == "<u_1, v_1> = 1, expected 0"


def test_target_always_contains_zero():
    assert MvFamily(6, (1, 3), ((0,),), ((0,),)).target == (0, 1, 3)


@pytest.mark.parametrize(
    "u, v",
    [
        (((1, 0),), ((0, 1), (1, 0))),   # different lengths
        (((1, 0), (1,)), ((0, 1), (1, 0))),  # ragged
        (((6, 0),), ((0, 1),)),          # entry outside Z_6
        ((), ()),
    ],
)
def test_family_shape_checks(u, v):
    with pytest.raises(MvfError):
        MvFamily(6, S6, u, v)


def test_truncate(toy_family):
    assert toy_family.truncate(1).n == 1
    with pytest.raises(MvfError):
        toy_family.truncate(3)


# ----------------------------------------------------------------------------
# Brute force
# ----------------------------------------------------------------------------

def test_bruteforce_toy():
    fam = mvf_bruteforce(6, S6, 2, 2)
    assert fam.u == ((0, 1), (1, 0))
    assert fam.v == ((1, 0), (0, 1))
    assert mvf_validate(fam) is None


def test_bruteforce_one_dimensional():
    fam = mvf_bruteforce(6, S6, 1, 2)
    assert (fam.u, fam.v) == (((2,), (3,)), ((3,), (2,)))
    assert mvf_validate(fam) is None


def test_bruteforce_single_pair_is_zero():
    fam = mvf_bruteforce(6, S6, 3, 1)
    assert fam.u == ((0, 0, 0),) and fam.v == ((0, 0, 0),)


def test_bruteforce_not_found():
    assert mvf_bruteforce(2, (0, 1), 1, 2) is None


def test_bruteforce_budget():
    with pytest.raises(BudgetExceededError):
        mvf_bruteforce(6, S6, 4, 2, budget=1000)


def test_bruteforce_gf9_scale():
    fam = mvf_bruteforce(12, canonical_set(12), 2, 2, budget=10**7)
    assert fam is not None and mvf_validate(fam) is None


# ----------------------------------------------------------------------------
# Set-system construction
# ----------------------------------------------------------------------------

@pytest.mark.parametrize("h, n, k", [(2, 2, 3), (3, 3, 4), (4, 6, 11), (5, 10, 16)])
def test_grolmusz_over_z6(h, n, k):
    fam = mvf_grolmusz(6, h)
    assert (fam.n, fam.k) == (n, k)
    assert fam.target == S6
    assert mvf_validate(fam) is None


def test_grolmusz_size_grows():
    sizes = [mvf_grolmusz(6, h).n for h in range(2, 6)]
    assert sizes == sorted(set(sizes))


def test_grolmusz_n_exceeds_k():
    fam = mvf_grolmusz(6, 8, weight=4)
    assert (fam.n, fam.k) == (70, 37)
    assert mvf_validate(fam) is None


def test_grolmusz_over_z1022():
    fam = mvf_grolmusz(1022, 7, weight=1)
    assert (fam.k, fam.n) == (8, 7)
    assert mvf_validate(fam) is None


@pytest.mark.parametrize("m", [4, 7, 12])
def test_grolmusz_needs_squarefree_composite(m):
    with pytest.raises(MvfError):
        mvf_grolmusz(m, 3)


def test_grolmusz_weight_range():
    with pytest.raises(MvfError):
        mvf_grolmusz(6, 3, weight=3)
    with pytest.raises(MvfError):
        mvf_grolmusz(6, 1)


# ----------------------------------------------------------------------------
# Text format
# ----------------------------------------------------------------------------

def test_mvf_text_format(toy_family):
    text = mvf_dumps(toy_family)
    assert text == "6 2 2 S=0,1,3,4\n1 0 | 0 1\n0 1 | 1 0\n"
    assert mvf_loads(text) == toy_family


def test_mvf_file(tmp_path, toy_family):
    path = tmp_path / "family.mvf"
    save_mvf(toy_family, path)
    assert load_mvf(path) == toy_family


def test_mvf_file_errors(tmp_path, toy_family):
    with pytest.raises(MvfError, match="cannot read"):
        load_mvf(tmp_path / "missing.mvf")
    with pytest.raises(MvfError, match="cannot write"):
        save_mvf(toy_family, tmp_path / "missing" / "family.mvf")


@pytest.mark.parametrize(
    "text",
    [
        "",
        "6 2 2\n1 0 | 0 1\n0 1 | 1 0\n",
        "6 2 3 S=0,1\n1 0 | 0 1\n0 1 | 1 0\n",
        "6 2 1 S=0,1\n1 0 0 1\n",
        "6 2 1 S=0,1\n1 0 | 0\n",
        "6 2 1 S=0,1\n1 a | 0 1\n",
    ],
)
def test_mvf_text_rejects(text):
    with pytest.raises(MvfError):
        mvf_loads(text)
