import pytest

from equipart.exceptions import FamilyDomainError
from equipart.families import (
    FAMILIES,
    cascade_family,
    full_ortho_family,
    ham_sandwich_cascade,
    last_ortho_family,
    near_full_ortho_family,
)
from equipart.problems import all_pairs, constraint_dimension, last_orthogonal


def test_cascade_examples():
    inst = cascade_family(0, 1, 3)
    assert inst.problem.m == (1, 1, 2) and inst.d == 4
    inst = cascade_family(0, 1, 2)
    assert inst.problem.m == (1, 1) and inst.d == 2
    inst = cascade_family(0, 1, 4)
    assert inst.problem.m == (1, 1, 2, 4) and inst.d == 8
    assert constraint_dimension(inst.problem) == 32


def test_cascade_with_containment():
    inst = cascade_family(0, 1, 2, a=(0, 1))
    assert inst.problem.m == (1, 0) and inst.problem.a == (0, 1) and inst.d == 2


def test_cascade_preconditions():
    with pytest.raises(FamilyDomainError):
        cascade_family(0, 2, 3)  # t > 2^q
    with pytest.raises(FamilyDomainError):
        cascade_family(1, 1, 3, a=(2, 1, 1))  # not nondecreasing
    with pytest.raises(FamilyDomainError):
        cascade_family(0, 1, 3, a=(0, 2, 2))  # a2 > 2*a1 + t
    with pytest.raises(FamilyDomainError):
        cascade_family(1, 2, 3, a=(1, 1, 1))  # a_(k-1) > 2^q - t


def test_full_ortho_examples():
    inst = full_ortho_family(1, 2, 3)
    assert inst.problem.m == (2, 1, 4) and inst.d == 8
    assert inst.problem.ortho == all_pairs(3)
    inst = full_ortho_family(2, 3, 2)
    assert inst.problem.m == (5, 2) and inst.d == 9
    inst = full_ortho_family(1, 2, 2)
    assert inst.problem.m == (2, 1) and inst.d == 4
    assert constraint_dimension(inst.problem) == 8


def test_full_ortho_needs_t_at_least_two():
    with pytest.raises(FamilyDomainError):
        full_ortho_family(1, 1, 3)


def test_near_full_ortho_examples():
    inst = near_full_ortho_family(1, 1, 4)
    assert inst.problem.m == (3, 1, 1, 8) and inst.d == 17
    assert (1, 2) not in inst.problem.ortho and len(inst.problem.ortho) == 5
    with pytest.raises(FamilyDomainError):
        near_full_ortho_family(0, 1, 4)  # 2^q < t + k - 3
    with pytest.raises(FamilyDomainError):
        near_full_ortho_family(1, 1, 2)


def test_last_ortho_examples():
    inst = last_ortho_family(0, 1, 4)
    assert inst.problem.m == (1, 1, 2, 1) and inst.d == 8
    assert inst.problem.ortho == last_orthogonal(4)
    inst = last_ortho_family(1, 1, 3)
    assert inst.problem.m == (3, 1, 1) and inst.d == 9
    inst = last_ortho_family(1, 1, 3, ortho=[(2, 3)])
    assert inst.problem.m == (3, 1, 2)
    with pytest.raises(FamilyDomainError):
        last_ortho_family(0, 1, 3, ortho=[(1, 2)])
    with pytest.raises(FamilyDomainError):
        last_ortho_family(0, 1, 3, ortho=[])


def test_ham_sandwich_cascade():
    inst = ham_sandwich_cascade(0, 2)
    assert inst.problem.m == (1, 1) and inst.d == 2
    inst = ham_sandwich_cascade(0, 3)
    assert inst.problem.m == (1, 1, 2) and inst.d == 4
    inst = ham_sandwich_cascade(1, 2)
    assert inst.problem.m == (2, 2) and inst.d == 4
    inst = ham_sandwich_cascade(2, 4)
    assert inst.problem.m == (4, 4, 8, 16) and inst.d == 32


def test_all_generators_tight_on_stated_box():
    # q <= 3, k <= 5, a = 0 (and small a for the affine-capable families):
    # every generated instance satisfies C = k*d
    checked = 0
    for q in range(4):
        for t in range(1, 2**q + 1):
            for k in range(1, 6):
                inst = cascade_family(q, t, k)
                assert constraint_dimension(inst.problem) == k * inst.d
                checked += 1
                for a1 in range(3):
                    a = (a1,) * k
                    try:
                        inst = cascade_family(q, t, k, a=a)
                    except FamilyDomainError:
                        continue
                    assert constraint_dimension(inst.problem) == k * inst.d
                    checked += 1
                if k >= 2 and t >= 2:
                    try:
                        inst = full_ortho_family(q, t, k)
                    except FamilyDomainError:
                        pass
                    else:
                        assert constraint_dimension(inst.problem) == k * inst.d
                        checked += 1
                if k >= 3:
                    if 2**q >= t + k - 3:
                        inst = near_full_ortho_family(q, t, k)
                        assert constraint_dimension(inst.problem) == k * inst.d
                        checked += 1
                    for j in range(1, k):
                        pairs = sorted(last_orthogonal(k))[:j]
                        try:
                            inst = last_ortho_family(q, t, k, ortho=pairs)
                        except FamilyDomainError:
                            continue
                        assert constraint_dimension(inst.problem) == k * inst.d
                        checked += 1
    assert checked > 200


def test_family_registry_and_provenance():
    assert set(FAMILIES) == {
        "cascade",
        "ortho-full",
        "ortho-not12",
        "ortho-last",
        "hs-cascade",
    }
    inst = cascade_family(0, 1, 3)
    assert "cascade family" in inst.provenance()
    problem, d = inst  # tuple-style unpacking
    assert problem is inst.problem and d == inst.d
