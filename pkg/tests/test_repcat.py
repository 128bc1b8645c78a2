import itertools

import numpy as np
import pytest

from hallforge.errors import BudgetExceeded
from hallforge.quiver import Quiver, a_n, add_dims, kronecker
from hallforge.repcat import Rep, enumerate_isoclasses, find_isomorphism

from oracles import (
    brute_aut_order,
    brute_ext_size,
    brute_hall_number,
    brute_homs,
    brute_structure_count,
    gl_order,
)


def dims_gl(dim, q):
    out = 1
    for d in dim:
        out *= gl_order(d, q)
    return out


@pytest.fixture(scope="module")
def a2():
    return enumerate_isoclasses(a_n(2), 2, 3)


def test_a1_classes():
    for q in (2, 3, 5, 7):
        t = enumerate_isoclasses(a_n(1), q, 2)
        assert len(t) == 3
        assert [c.dim for c in t.classes] == [(0,), (1,), (2,)]


def test_a1_one_class_per_dimension():
    t = enumerate_isoclasses(a_n(1), 2, 4)
    assert [len(t.ids_with_dim((n,))) for n in range(5)] == [1] * 5


def test_a2_classes(a2):
    t = enumerate_isoclasses(a_n(2), 2, 2)
    assert len(t) == 7
    assert [c.dim for c in t.classes] == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (1, 1), (0, 2)]
    assert len(t.ids_with_dim((1, 1))) == 2
    assert t.simple(0) == 1 and t.simple(1) == 2
    # class 5 is the indecomposable and has the nonzero arrow matrix
    assert t.classes[5].mats[0].tolist() == [[1]]


def test_class_counts_are_stable():
    # frozen from the orbit engine; iso-class IDs must not drift between runs
    assert len(enumerate_isoclasses(a_n(2), 2, 4)) == 22
    assert len(enumerate_isoclasses(a_n(3), 2, 4)) == 62
    assert len(enumerate_isoclasses(kronecker(), 2, 4)) == 49
    assert len(enumerate_isoclasses(kronecker(), 3, 4)) == 62


@pytest.mark.parametrize("quiver", [a_n(2), a_n(2, True), a_n(3), kronecker()], ids=["A2", "A2r", "A3", "K2"])
@pytest.mark.parametrize("q", [2, 3])
def test_orbit_sizes_cover_every_structure(quiver, q):
    # sum over classes of |GL_d| / |Aut M| counts every representation once
    t = enumerate_isoclasses(quiver, q, 3)
    by_dim = {}
    for c in range(len(t)):
        d = t.dim_of(c)
        by_dim[d] = by_dim.get(d, 0) + dims_gl(d, q) // t.aut_order(c)
    for d, total in by_dim.items():
        assert total == brute_structure_count(quiver.arrows, d, q)


def test_iso_class_of(a2):
    q = a2.quiver
    assert a2.iso_class_of(Rep.zero(q, (0, 0))) == 0
    assert a2.iso_class_of(Rep.zero(q, (1, 0))) == a2.simple(0)
    assert a2.iso_class_of(Rep.build(q, (1, 1), [[1]], 2)) == 5


def test_iso_class_of_agrees_with_intertwiner_search():
    quiver = kronecker()
    t = enumerate_isoclasses(quiver, 2, 3)
    for dim in [(1, 1), (1, 2), (2, 1)]:
        shapes = [(dim[tt], dim[s]) for s, tt in quiver.arrows]
        for entries in itertools.product(range(2), repeat=sum(r * c for r, c in shapes)):
            mats, pos = [], 0
            for r, c in shapes:
                mats.append(np.array(entries[pos : pos + r * c]).reshape(r, c))
                pos += r * c
            rep = Rep.build(quiver, dim, mats, 2)
            cid = t.iso_class_of(rep)
            assert find_isomorphism(quiver, rep, t.classes[cid], 2) is not None
            for other in t.ids_with_dim(dim):
                if other != cid:
                    assert find_isomorphism(quiver, rep, t.classes[other], 2) is None


def test_nilpotency_on_cyclic_quiver():
    cyc = Quiver.from_labels(["a", "b"], [("a", "b"), ("b", "a")])
    t = enumerate_isoclasses(cyc, 2, 2)
    # dim (1,1): both arrows nonzero gives a non-nilpotent cycle, so only 3 classes
    assert len(t.ids_with_dim((1, 1))) == 3
    with pytest.raises(ValueError):
        t.iso_class_of(Rep.build(cyc, (1, 1), [[1], [1]], 2))


def test_hom_examples(a2):
    s1, s2, p = 1, 2, 5
    assert a2.hom_dim(s1, s1) == 1
    assert a2.hom_dim(s1, s2) == 0
    assert a2.hom_dim(s2, p) == 1
    assert a2.hom_dim(p, s2) == 0


def test_ext_examples(a2):
    assert a2.ext1_dim(1, 1) == 0
    assert a2.ext1_dim(1, 2) == 1
    assert a2.ext1_dim(2, 1) == 0


@pytest.mark.parametrize("quiver", [a_n(2), a_n(2, True), kronecker()], ids=["A2", "A2r", "K2"])
def test_hom_and_ext_against_brute_force(quiver):
    t = enumerate_isoclasses(quiver, 2, 3)
    cs = [c for c in range(len(t)) if sum(t.dim_of(c)) <= 3]
    for m, n in itertools.product(cs, repeat=2):
        if sum(t.dim_of(m)) + sum(t.dim_of(n)) > 3:
            continue
        a, b = t.classes[m], t.classes[n]
        homs = brute_homs(quiver.arrows, a.dim, a.mats, b.dim, b.mats, 2)
        assert len(homs) == 2 ** t.hom_dim(m, n)
        ext = brute_ext_size(quiver.arrows, a.dim, a.mats, b.dim, b.mats, 2)
        assert ext == 2 ** t.ext1_dim(m, n)
        assert t.hom_dim(m, n) - t.ext1_dim(m, n) == quiver.euler_form(a.dim, b.dim)


def test_aut_examples():
    for q in (2, 3, 5):
        t = enumerate_isoclasses(a_n(1), q, 2)
        assert t.aut_order(0) == 1
        assert t.aut_order(1) == q - 1
        assert t.aut_order(2) == (q * q - 1) * (q * q - q)


def test_aut_orbit_formula_agrees_with_counting():
    for quiver in (a_n(2), kronecker()):
        t = enumerate_isoclasses(quiver, 2, 3)
        for c in range(len(t)):
            a = t.classes[c]
            assert t.aut_order(c) == t.aut_order_by_enumeration(c)
            if sum(a.dim) <= 2:
                assert t.aut_order(c) == brute_aut_order(quiver.arrows, a.dim, a.mats, 2)


def test_hall_number_examples():
    for q in (2, 3):
        t = enumerate_isoclasses(a_n(1), q, 2)
        assert t.hall_number(1, 0, 1) == 1 and t.hall_number(0, 1, 1) == 1
        assert t.hall_number(1, 1, 2) == q + 1
    a2 = enumerate_isoclasses(a_n(2), 2, 2)
    assert a2.hall_number(1, 2, 5) == 1
    assert a2.hall_number(2, 1, 5) == 0
    assert a2.hall_number(1, 1, 5) == 0


def test_hall_numbers_against_brute_force():
    quiver = a_n(2)
    t = enumerate_isoclasses(quiver, 2, 3)
    reps = t.classes
    for l in range(len(t)):
        if sum(t.dim_of(l)) > 3 or sum(t.dim_of(l)) == 0:
            continue
        for m, n in itertools.product(range(len(t)), repeat=2):
            if add_dims(t.dim_of(m), t.dim_of(n)) != t.dim_of(l):
                continue
            want = brute_hall_number(
                quiver.arrows,
                (reps[m].dim, reps[m].mats),
                (reps[n].dim, reps[n].mats),
                (reps[l].dim, reps[l].mats),
                2,
            )
            assert t.hall_number(m, n, l) == want, (m, n, l)


def test_ext_counts():
    for q in (2, 3):
        a1 = enumerate_isoclasses(a_n(1), q, 2)
        assert a1.ext1_count_with_middle(1, 1, 2) == 1
        a2 = enumerate_isoclasses(a_n(2), q, 2)
        assert a2.ext1_count_with_middle(1, 2, 5) == q - 1
        assert a2.ext1_count_with_middle(1, 2, 4) == 1
        assert a2.ext1_count_with_middle(2, 1, 5) == 0


@pytest.mark.parametrize("q", [2, 3])
def test_riedtmann_peng_closure(q):
    t = enumerate_isoclasses(a_n(2), q, 4)
    for m, n in itertools.product(range(len(t)), repeat=2):
        if sum(t.dim_of(m)) + sum(t.dim_of(n)) > 4:
            continue
        total = sum(t.ext1_count_with_middle(m, n, l) for l, _ in t.middles(m, n))
        assert total == q ** t.ext1_dim(m, n)


def test_hall_associativity_a2():
    t = enumerate_isoclasses(a_n(2), 2, 3)
    ids = range(len(t))
    for m, n, l in itertools.product(ids, repeat=3):
        dim = add_dims(t.dim_of(m), t.dim_of(n), t.dim_of(l))
        if sum(dim) > 3:
            continue
        for x in t.ids_with_dim(dim):
            lhs = sum(t.hall_number(m, n, e) * t.hall_number(e, l, x)
                      for e in t.ids_with_dim(add_dims(t.dim_of(m), t.dim_of(n))))
            rhs = sum(t.hall_number(m, e, x) * t.hall_number(n, l, e)
                      for e in t.ids_with_dim(add_dims(t.dim_of(n), t.dim_of(l))))
            assert lhs == rhs


def test_dimension_additivity():
    t = enumerate_isoclasses(kronecker(), 2, 3)
    for l in range(len(t)):
        for (m, n), f in t.profile(l).items():
            assert f > 0 and add_dims(t.dim_of(m), t.dim_of(n)) == t.dim_of(l)


def test_guards():
    with pytest.raises(BudgetExceeded):
        enumerate_isoclasses(a_n(2), 2, 5)
    with pytest.raises(BudgetExceeded):
        enumerate_isoclasses(a_n(2), 5, 4)
    with pytest.raises(BudgetExceeded):
        enumerate_isoclasses(a_n(1), 7, 3)
    with pytest.raises(ValueError, match="not prime"):
        enumerate_isoclasses(a_n(1), 4, 2)
    t = enumerate_isoclasses(a_n(2), 2, 2)
    with pytest.raises(BudgetExceeded):
        t.ids_with_dim((2, 1))


def test_json_shape():
    t = enumerate_isoclasses(a_n(2), 2, 2)
    doc = t.to_json()
    assert doc[5] == {"id": 5, "dim": [1, 1], "mats": [[1]]}
    assert doc[3] == {"id": 3, "dim": [2, 0], "mats": [[]]}
