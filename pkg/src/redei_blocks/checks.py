"""
Named, parameterized verification checks and the verify-all harness.

Every check returns a CheckReport; parameters are validated against a JSON
schema before the check runs.  Parameter combinations outside a check's
hypotheses produce status "skip" with a reason.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from jsonschema import ValidationError, validate
from loguru import logger
from sympy.combinatorics.named_groups import AlternatingGroup, SymmetricGroup

from . import decomp, intforms, invariants, morphisms, subsections
from . import generic_group as gg
from . import nf_group as nf
from .errors import InvalidParametersError, UnknownCheckError
from .nf_group import AbelianType, GroupParams
from .utils import get_env

PASS = "pass"
FAIL = "fail"
SKIP = "skip"
INCONCLUSIVE = "inconclusive"


@dataclass
class CheckReport:
    check_id: str
    params: Dict[str, Any]
    status: str
    details: str
    data: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check_id": self.check_id,
            "params": self.params,
            "status": self.status,
            "details": self.details,
            "data": self.data,
        }


class _Skip(Exception):
    pass


Outcome = Tuple[str, str, Dict[str, Any]]


def _verdict(ok: bool, details: str, data: Dict[str, Any]) -> Outcome:
    return (PASS if ok else FAIL), details, data


# ---------- Schemas ----------

def _int_props(**minimums: int) -> Dict[str, Any]:
    return {
        "type": "object",
        "properties": {name: {"type": "integer", "minimum": low} for name, low in minimums.items()},
        "required": list(minimums),
        "additionalProperties": False,
    }


RS_SCHEMA = _int_props(r=1, s=1)
R_SCHEMA = _int_props(r=1)
S_SCHEMA = _int_props(s=0)
NO_PARAMS = {"type": "object", "additionalProperties": False}
DISC_SCHEMA = {
    "type": "object",
    "properties": {"disc": {"type": "integer", "maximum": -1}, "primitive_only": {"type": "boolean"}},
    "required": ["disc"],
    "additionalProperties": False,
}
FORM_SCHEMA = {
    "type": "object",
    "properties": {k: {"type": "integer"} for k in ("a", "b", "c")},
    "required": ["a", "b", "c"],
    "additionalProperties": False,
}
FACTORS_SCHEMA = {
    "type": "object",
    "properties": {"factors": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1}},
    "required": ["factors"],
    "additionalProperties": False,
}
N_SCHEMA = _int_props(n=2)
SEARCH_SCHEMA = {
    "type": "object",
    "properties": {
        "cap_nodes": {"type": "integer", "minimum": 0},
        "cap_seconds": {"type": "number", "minimum": 0},
    },
    "additionalProperties": False,
}


def _params(p: GroupParams) -> str:
    return f"D({p.r},{p.s})"


def _require(condition: bool, reason: str) -> None:
    if not condition:
        raise _Skip(reason)


# ---------- Group structure ----------

def _check_nf_arithmetic(params: Dict[str, Any]) -> Outcome:
    p = GroupParams(params["r"], params["s"])
    G = gg.build_nf_group(p)
    z = nf.z_gen(p)
    bad_inverse = [str(g) for g in nf.elements(p) if nf.multiply(p, g, nf.inverse(p, g)) != nf.IDENTITY]
    commutators = {nf.commutator(p, g, h) for g in (nf.x_gen(p), nf.y_gen(p)) for h in nf.elements(p)}
    center_ok = all(nf.is_central(p, g) == (g.a % 2 == 0 and g.b % 2 == 0) for g in nf.elements(p))
    data = {
        "order": G.order,
        "group_law": G.check_group_law(samples=10_000),
        "presentation": gg.presentation_match(G, nf.index_of(p, nf.x_gen(p)), nf.index_of(p, nf.y_gen(p)), p),
        "commutators_in_z": commutators <= {nf.IDENTITY, z},
        "center_predicate": center_ok,
    }
    ok = not bad_inverse and all(data.values()) and G.order == p.order
    return _verdict(ok, f"{_params(p)} normal-form arithmetic against its Cayley table", data)


def _check_characteristic(params: Dict[str, Any]) -> Outcome:
    p = GroupParams(params["r"], params["s"])
    cs = nf.characteristic_subgroups(p)
    expected_center = AbelianType((1 << (p.r - 1), 1 << (p.s - 1), 2))
    data = {
        "center": cs.center.to_list(),
        "derived": cs.derived.to_list(),
        "frattini_equals_center": cs.frattini_equals_center,
        "center_order": cs.center_order,
    }
    ok = (cs.center == expected_center and cs.derived == AbelianType((2,))
          and cs.frattini_equals_center and cs.center_order == p.order // 4)
    return _verdict(ok, f"Z({_params(p)}) = Phi = {expected_center}, D' = C2", data)


def _check_maxsubgroups(params: Dict[str, Any]) -> Outcome:
    r, s = params["r"], params["s"]
    _require(r >= 2, "r = s = 1 is the dihedral group of order 8")
    p = GroupParams(r, s)
    types = sorted((t.to_list() for _, t in nf.maximal_subgroups(p)), reverse=True)
    expected = sorted([AbelianType((1 << (r - 1), 1 << s, 2)).to_list(),
                       AbelianType((1 << r, 1 << (s - 1), 2)).to_list(),
                       AbelianType((1 << r, 1 << (s - 1), 2)).to_list()], reverse=True)
    return _verdict(types == expected, f"three abelian maximal subgroups of {_params(p)}",
                    {"types": types, "expected": expected})


def _check_classcount(params: Dict[str, Any]) -> Outcome:
    p = GroupParams(params["r"], params["s"])
    classes = nf.conjugacy_classes(p)
    expected = 5 << (p.r + p.s - 2)
    sizes = sorted({len(c) for c in classes})
    linear = p.order // 2
    bookkeeping = (p.order - linear) // 4 + linear
    ok = len(classes) == expected == bookkeeping and set(sizes) <= {1, 2}
    return _verdict(ok, f"|Irr({_params(p)})| = 5*2^(r+s-2)",
                    {"classes": len(classes), "expected": expected, "class_sizes": sizes})


def _check_aut2group(params: Dict[str, Any]) -> Outcome:
    p = GroupParams(params["r"], params["s"])
    info = morphisms.nf_automorphism_group(p)
    expected = p.r != p.s or p.r == 1
    data: Dict[str, Any] = {"order": info.order, "is_two_group": info.is_two_group}
    if info.sample_order3 is not None:
        G = info.sample_order3.group
        data["sample_images"] = [list(G.labels[info.sample_order3(g)]) for g in info.generators]
    return _verdict(info.is_two_group == expected, f"Aut({_params(p)}) is a 2-group iff r != s or r = s = 1", data)


def _check_redei_family(params: Dict[str, Any]) -> Outcome:
    n = params["n"]
    pairs = nf.redei_family(n)
    data = {"pairs": [list(pair) for pair in pairs], "count": len(pairs)}
    ok = len(pairs) == (n - 1) // 2 and all(r + s + 1 == n and r >= s >= 1 for r, s in pairs)
    return _verdict(ok, f"minimal nonabelian groups D(r,s) of order 2^{n}", data)


def _check_quotients(params: Dict[str, Any]) -> Outcome:
    r = params["r"]
    _require(r >= 2, "needs r >= 2")
    p1 = GroupParams(r, 1)
    G1 = gg.build_nf_group(p1)
    Q1 = gg.quotient(G1, gg.nf_subgroup(p1, G1, [nf.make(p1, 2, 0)]))
    d8 = Q1.order == 8 and not Q1.is_abelian() and max(Q1.element_orders) == 4
    data: Dict[str, Any] = {"rs1_mod_c": {"order": Q1.order, "dihedral": d8}}
    pr = GroupParams(r, r)
    Gr = gg.build_nf_group(pr)
    Qr = gg.quotient(Gr, gg.nf_subgroup(pr, Gr, [nf.z_gen(pr)]))
    inv = gg.abelian_invariants(Qr).to_list()
    data["req_s_mod_z"] = inv
    ok = d8 and inv == [1 << r, 1 << r]
    return _verdict(ok, f"D({r},1)/<x^2> is dihedral of order 8 and D({r},{r})/<z> is homocyclic", data)


# ---------- Constructions and fusion ----------

def _check_a4_semidirect(params: Dict[str, Any]) -> Outcome:
    r = params["r"]
    _require(r >= 2, "needs r >= 2")
    sd = gg.build_a4_semidirect(r)
    G = sd.group
    comm = G.labels[G.commutator(sd.xt, sd.yt)]
    report = morphisms.frobenius_two_nilpotent(G)
    data = {
        "order": G.order,
        "presentation": gg.presentation_match(G, sd.xt, sd.yt, GroupParams(r, 1)),
        "commutator": [list(comm[0]), comm[1]],
        "two_nilpotent": report.two_nilpotent,
        "sylow_order": report.sylow_order,
    }
    ok = (data["presentation"] and comm == sd.commutator_label and not report.two_nilpotent
          and report.sylow_order == 1 << (r + 2))
    return _verdict(ok, f"<xt, yt> in A4 x| C{1 << r} is D({r},1) with nonnilpotent fusion", data)


def _check_fcentric(params: Dict[str, Any]) -> Outcome:
    r = params["r"]
    _require(r >= 2, "needs r >= 2")
    sd = gg.build_a4_semidirect(r)
    G = sd.group
    S = gg.subgroup_closure(G, [sd.xt, sd.yt])
    classes = morphisms.fcentric_classes(G, S)
    autos = [morphisms.automizer(G, Q) for Q in classes]
    odd = [Q.order for Q, a in zip(classes, autos) if not a.is_two_group]
    data = {
        "orders": [Q.order for Q in classes],
        "automizer_orders": [a.order for a in autos],
        "odd_automizer_orders": odd,
    }
    expected = [1 << (r + 1)] * 3 + [1 << (r + 2)]
    ok = sorted(data["orders"]) == expected and odd == [1 << (r + 1)]
    return _verdict(ok, "four F-centric classes, odd automizer only at <x^2, y, z>", data)


def _check_abelian_aut(params: Dict[str, Any]) -> Outcome:
    t = AbelianType(tuple(params["factors"]))
    predicted = morphisms.abelian_aut_is_two_group(t)
    info = morphisms.automorphism_group(morphisms.build_abelian_group(t))
    data = {"type": t.to_list(), "aut_order": info.order, "predicted": predicted}
    return _verdict(predicted == info.is_two_group, f"Aut({t}) is a 2-group iff exponents are distinct", data)


def _check_fixed_points_abelian(params: Dict[str, Any]) -> Outcome:
    s = params["s"]
    _require(s >= 1, "needs s >= 1")
    t = AbelianType((1 << s, 2, 2))
    maps = morphisms.cyclic_order_three_maps(t)
    _require(bool(maps), f"{t} has no automorphism of order 3")
    G = maps[0].group
    fixed = [morphisms.fixed_points(G, alpha) for alpha in maps]
    bad = sum(1 for f in fixed if f.order != 1 << s or not morphisms.is_cyclic(G, f))
    return _verdict(bad == 0, f"every order-3 automorphism of {t} fixes a cyclic group of order 2^{s}",
                    {"fixed_orders": sorted({f.order for f in fixed}), "order3_maps": len(maps),
                     "failures": bad})


def _check_fixed_points_center(params: Dict[str, Any]) -> Outcome:
    r = params["r"]
    _require(r >= 2, "needs r >= 2")
    p = GroupParams(r, r)
    alpha = morphisms.order3_automorphism(p)
    G = alpha.group
    fixed = morphisms.fixed_points(G, alpha)
    z = nf.index_of(p, nf.z_gen(p))
    central_fixed = sorted(g for g in fixed.elements if nf.is_central(p, nf.NfElement(*G.labels[g])))
    singles, triples = subsections.alpha_orbit_partition(r, alpha)
    expected_triples = ((1 << (2 * r - 1)) - 2) // 3
    data = {"central_fixed": len(central_fixed), "fixed_points": singles, "three_orbits": triples}
    ok = central_fixed == sorted([G.identity, z]) and singles == 2 and triples == expected_triples
    return _verdict(ok, f"z is the only nontrivial central fixed point of alpha on {_params(p)}", data)


def _check_fusion_req_s(params: Dict[str, Any]) -> Outcome:
    r = params["r"]
    _require(r >= 2, "needs r >= 2")
    p = GroupParams(r, r)
    alpha = morphisms.order3_automorphism(p)
    sd = gg.semidirect_by_automorphism(alpha.group, alpha.perm)
    H = sd.group
    base = gg.subgroup_from_elements(H, sd.base)
    info = morphisms.automizer(H, base)
    h1 = morphisms.h1_units_char2(morphisms.automizer_group(H, base))
    report = morphisms.frobenius_two_nilpotent(H)
    data = {"automizer_order": info.order, "h1": h1, "two_nilpotent": report.two_nilpotent,
            "forced_nilpotent": morphisms.fusion_nilpotency_forced(p)}
    ok = info.order == 12 and h1 == 3 and not report.two_nilpotent and not data["forced_nilpotent"]
    return _verdict(ok, f"{_params(p)} x| C3 realizes nonnilpotent fusion", data)


def _check_fusion_forced(params: Dict[str, Any]) -> Outcome:
    p = GroupParams(params["r"], params["s"])
    forced = morphisms.fusion_nilpotency_forced(p)
    report = morphisms.frobenius_two_nilpotent(gg.build_nf_group(p))
    ok = report.two_nilpotent and forced == (p.s != 1 and p.r != p.s)
    return _verdict(ok, f"fusion on {_params(p)} nilpotent unless s = 1 or r = s",
                    {"forced_nilpotent": forced, "self_fusion_nilpotent": report.two_nilpotent})


def _permutation_group(group: Any, name: str) -> gg.CayleyGroup:
    elements = sorted(group.elements, key=lambda perm: perm.array_form)
    return gg.CayleyGroup.from_elements(elements, lambda a, b: a * b, name=name)


def _check_h1(params: Dict[str, Any]) -> Outcome:
    s3 = morphisms.h1_units_char2(_permutation_group(SymmetricGroup(3), "S3"))
    a4 = morphisms.h1_units_char2(_permutation_group(AlternatingGroup(4), "A4"))
    v4 = morphisms.h1_units_char2(morphisms.build_abelian_group(AbelianType((2, 2))))
    gluing = morphisms.gluing_h1_incidence()
    control = morphisms.gluing_h1_incidence(3, 1)
    data = {"S3": s3, "A4": a4, "C2xC2": v4, "gluing": gluing, "gluing_control": control}
    ok = (s3, a4, v4, gluing, control) == (1, 3, 1, 0, 1)
    return _verdict(ok, "first cohomology with F^x coefficients", data)


# ---------- Subsections ----------

def _check_tset_rs1(params: Dict[str, Any]) -> Outcome:
    r = params["r"]
    _require(r >= 2, "needs r >= 2")
    ts = subsections.t_set_rs1(r)
    check = subsections.k_minus_l_check(ts)
    inv = invariants.invariants_rs1(r)
    two = sum(1 for e in ts.nontrivial() if e.l_value == 2)
    data = {"size": len(ts), "l2_entries": two, "sum": check.sum, "closed_form": check.closed_form}
    ok = len(ts) == 1 << (r + 1) and two == (1 << (r - 1)) - 1 and check.match and check.sum == inv.k - inv.l
    return _verdict(ok, f"|T| = 2^{r + 1} and k - l = {inv.k - inv.l}", data)


def _check_tset_req_s(params: Dict[str, Any]) -> Outcome:
    r = params["r"]
    _require(r >= 2, "needs r >= 2")
    p = GroupParams(r, r)
    ts = subsections.t_set_req_s(r, morphisms.order3_automorphism(p))
    check = subsections.k_minus_l_check(ts)
    inv = invariants.invariants_req_s_special(r)
    threes = [str(e.element) for e in ts.nontrivial() if e.l_value == 3]
    data = {"size": len(ts), "l3_entries": threes, "sum": check.sum, "closed_form": check.closed_form}
    ok = check.match and threes == ["z"] and check.sum == inv.k - inv.l
    return _verdict(ok, f"|T| = {len(ts)} and k - l = {inv.k - inv.l}", data)


def _check_galois_orbits(params: Dict[str, Any]) -> Outcome:
    r = params["r"]
    _require(r >= 2, "needs r >= 2")
    census = subsections.galois_orbit_structure(subsections.t_set_rs1(r))
    data = {
        "orbit_count": census.orbit_count,
        "length_multiset": census.length_multiset,
        "height0_families": len(census.height0_family_sizes),
        "subsection_orbits": census.subsection_orbit_count,
    }
    ok = census.orbit_count == 3 * r + 2 and len(census.height0_family_sizes) == 2 * (r + 1)
    return _verdict(ok, f"3r + 2 = {3 * r + 2} column orbits", data)


def _check_chains(params: Dict[str, Any]) -> Outcome:
    r = params["r"]
    _require(r >= 2, "needs r >= 2")
    report = subsections.elem_abelian_chains(GroupParams(r, 1))
    data = {"max_length": report.max_length, "e8_class_count": report.e8_class_count,
            "chain_counts_by_length": report.chain_counts_by_length}
    ok = report.max_length == 3 and report.e8_class_count == 1 and report.e8_is_standard and report.chains_end_at_e8
    return _verdict(ok, f"elementary abelian chains in D({r},1) end at the unique E8", data)


# ---------- Invariants ----------

def _gates(inv: invariants.BlockInvariants) -> Tuple[bool, Dict[str, Any]]:
    report = invariants.check_inequalities(inv)
    ok = report.robinson and report.olsson and report.kw_bound is not False and report.high_heights_vanish
    return ok, {"robinson": report.robinson, "olsson": report.olsson, "kw_bound": report.kw_bound}


def _check_invariants_rs1(params: Dict[str, Any]) -> Outcome:
    r = params["r"]
    _require(r >= 2, "needs r >= 2")
    inv = invariants.invariants_rs1(r)
    gates_ok, data = _gates(inv)
    data.update(inv.row())
    expected = (5 << (r - 1), 1 << (r + 1), 1 << (r - 1), 2)
    ok = gates_ok and (inv.k, inv.k_i(0), inv.k_i(1), inv.l) == expected
    classes = nf.conjugacy_class_count(GroupParams(r, 1))
    data["class_count"] = classes
    ok = ok and classes == inv.k
    return _verdict(ok, f"k(B) = |Irr(D({r},1))| = {inv.k}", data)


def _check_invariants_req_s(params: Dict[str, Any]) -> Outcome:
    r = params["r"]
    _require(r >= 2, "needs r >= 2")
    inv = invariants.invariants_req_s_special(r)
    bounds = invariants.invariants_req_s_bounds(r)
    gates_ok, data = _gates(inv)
    data.update(inv.row())
    data["k_range"] = [bounds.k_min, bounds.k_max]
    ok = gates_ok and bounds.k_min <= inv.k <= bounds.k_max and inv.l >= bounds.l_min
    return _verdict(ok, f"special-case invariants of D({r},{r}) pass every gate", data)


def _check_invariants_eb3(params: Dict[str, Any]) -> Outcome:
    s = params["s"]
    inv = invariants.invariants_eB3(s)
    gates_ok, data = _gates(inv)
    data.update(inv.row())
    subsection_count = (1 << s) + ((1 << s) - 1) * 3
    ok = gates_ok and inv.k - inv.l == (1 << (s + 2)) - 3 == subsection_count
    return _verdict(ok, f"k - l = 2^{s + 2} - 3 for C_(2^{s}) x C2 x C2", data)


# ---------- Forms ----------

def _check_qf_classes(params: Dict[str, Any]) -> Outcome:
    disc = params["disc"]
    forms = intforms.reduced_classes(disc, params.get("primitive_only", True))
    data = {"classes": [list(q.as_tuple()) for q in forms], "count": len(forms)}
    ok = all(q.disc == disc and intforms.reduce_qf(q).reduced == q for q in forms)
    if disc == -32 and params.get("primitive_only", True):
        ok = ok and data["classes"] == [[1, 0, 8], [3, 2, 3]]
    return _verdict(ok, f"reduced forms of discriminant {disc}", data)


def _check_qf_reduce(params: Dict[str, Any]) -> Outcome:
    q = intforms.QuadForm(params["a"], params["b"], params["c"])
    red = intforms.reduce_qf(q)
    ok = red.reduced.disc == q.disc and q.transform(red.transform) == red.reduced and abs(red.transform.det()) == 1
    return _verdict(ok, f"{q} reduces to {red.reduced}",
                    {"reduced": list(red.reduced.as_tuple()), "transform": red.transform.to_lists()})


def _check_cartan_rs1(params: Dict[str, Any]) -> Outcome:
    r = params["r"]
    _require(r >= 2, "needs r >= 2")
    cand = intforms.cartan_candidates_rs1(r)
    dets = [M.det() for M in cand.matrices]
    residue = decomp.contribution_sum_residue(r)
    data = {"retained": cand.retained.to_lists(), "snf": list(cand.snf_retained), "dets": dets, "residue": residue}
    ok = (cand.snf_retained == (1 << (r - 1), 1 << (r + 2)) and dets == [8 << (2 * r - 2)] * 2 and residue == 2)
    return _verdict(ok, f"Cartan matrix of a D({r},1) block is 2^{r - 1}[[3,1],[1,3]]", data)


def _check_cartan_congruence(params: Dict[str, Any]) -> Outcome:
    target = intforms.IntMatrix.of([[3, 1], [1, 3]])
    first = intforms.congruent_transform(intforms.IntMatrix.of([[8, 4], [4, 3]]),
                                         intforms.IntMatrix.of([[1, -1], [0, 1]]))
    second = intforms.congruent_transform(intforms.IntMatrix.of([[4, 2], [2, 3]]),
                                          intforms.IntMatrix.of([[0, 1], [-1, 1]]))
    data = {"first": first.to_lists(), "second": second.to_lists()}
    return _verdict(first == target and second == target, "both congruence witnesses give [[3,1],[1,3]]", data)


def _check_cartan_req_s(params: Dict[str, Any]) -> Outcome:
    r = params["r"]
    _require(r >= 2, "needs r >= 2")
    c = intforms.cartan_req_s(r)
    q = 1 << (2 * r)
    data = {"c_bar": c.c_bar.to_lists(), "snf_bar": list(c.snf_bar), "snf_bz": list(c.snf_bz), "det": c.c_bar.det()}
    ok = c.snf_bar == (1, 1, q) and c.snf_bz == (2, 2, 2 * q) and data["det"] == q
    return _verdict(ok, f"elementary divisors of C-bar at r={r}", data)


def _check_cartan_final(params: Dict[str, Any]) -> Outcome:
    final = intforms.cartan_r2_final()
    data = {"matrix": final.matrix.to_lists(), "snf": list(final.snf), "det": final.det}
    ok = final.snf == (2, 2, 32) and final.det == 128 and final.matrix.is_positive_definite()
    return _verdict(ok, "Cartan matrix of a D(2,2) block", data)


# ---------- Decomposition ----------

def _check_lemma_table(params: Dict[str, Any]) -> Outcome:
    r = params["r"]
    _require(r >= 2, "needs r >= 2")
    reports = {case: decomp.lemma_table_check(r, case) for case in (decomp.FIRST, decomp.SECOND)}
    data = {case: {"pairs": rep.pairs_checked, "mismatches": rep.mismatches[:5], "c_gram": rep.c_gram}
            for case, rep in reports.items()}
    return _verdict(all(rep.ok for rep in reports.values()), f"orthogonality table for D({r},1) columns", data)


def _check_divisibility(params: Dict[str, Any]) -> Outcome:
    r = params["r"]
    _require(r >= 2, "needs r >= 2")
    model = decomp.column_model_rs1(r)
    central = [b.families[0] for b in model.blocks if not b.in_c and b.families[0].central]
    noncentral = [b.families[0] for b in model.blocks if not b.in_c and not b.families[0].central]
    divisibility = [f.label for f in central if not decomp.check_divisibility_heights(f)]
    parity = [f.label for f in noncentral if not all(decomp.height_parity(f))]
    support = [decomp.support_counting(f, model.order) for f in central]
    covered = all(any(any(f.coeffs[chi]) for f in model.families) for chi in range(len(model.heights)))
    data = {
        "divisibility_failures": divisibility,
        "parity_failures": parity,
        "support": [s.total_support for s in support],
        "k": len(model.heights),
        "every_character_covered": covered,
    }
    ok = not divisibility and not parity and all(s.closes for s in support) and covered
    return _verdict(ok, f"divisibility, parity and support counting for D({r},1)", data)


def _check_ordinary_cartan(params: Dict[str, Any]) -> Outcome:
    r = params["r"]
    _require(r >= 2, "needs r >= 2")
    oc = decomp.ordinary_cartan_check(r)
    expected = intforms.IntMatrix.of([[4, 2], [2, 3]]).scale(1 << (r - 1))
    data = {"gram": oc.gram.to_lists(), "snf": list(oc.snf), "congruent": oc.congruent_to_target}
    ok = oc.gram == expected and oc.congruent_to_target and oc.snf == (1 << (r - 1), 1 << (r + 2))
    return _verdict(ok, f"Q^T Q ~ 2^{r - 1}[[3,1],[1,3]]", data)


def _check_contributions(params: Dict[str, Any]) -> Outcome:
    r = params["r"]
    _require(r >= 2, "needs r >= 2")
    data: Dict[str, Any] = {}
    ok = True
    for case in (decomp.FIRST, decomp.SECOND):
        model = decomp.column_model_rs1(r, case)
        f1, f2 = decomp.canonical_c_block(model).families
        diag = decomp.contributions_at_c(r, case, f1, f2)
        expected = tuple(3 if h == 0 else 4 for h in model.heights)
        sums = decomp.brauer_sum_check(r, case)
        data[case] = {"values": sorted(set(diag.values)), "brauer_sum": sums.holds}
        ok = ok and diag.values == expected and sums.holds
    return _verdict(ok, f"|D| m at c is 3 at height 0 and 4 at height 1; Brauer sums close", data)


def _check_residue(params: Dict[str, Any]) -> Outcome:
    r = params["r"]
    _require(r >= 2, "needs r >= 2")
    principal = decomp.contribution_sum_residue(r, 1)
    control = decomp.contribution_sum_residue(r, 3)
    return _verdict(principal == 2 and control == 0, "principal Cartan class forces residue 2 mod 4",
                    {"principal": principal, "control": control})


# ---------- Searches ----------

def _search_caps(params: Dict[str, Any]) -> decomp.SearchCaps:
    caps = decomp.SearchCaps.from_env()
    if "cap_nodes" in params:
        caps.nodes = params["cap_nodes"]
    if "cap_seconds" in params:
        caps.seconds = params["cap_seconds"]
    return caps


def _search_data(result: decomp.SearchResult) -> Dict[str, Any]:
    return {"status": result.status, "explored": result.explored,
            "consistent_found": result.consistent_found, "witnesses": result.witnesses[:1]}


def _check_search_rs1(params: Dict[str, Any]) -> Outcome:
    result = decomp.exclusion_search_r2(decomp.RS1_R2, _search_caps(params))
    data = _search_data(result)
    if result.status == decomp.INCONCLUSIVE:
        return INCONCLUSIVE, f"cap reached after {result.explored} nodes, {result.consistent_found} consistent", data
    if result.consistent_found >= 1:
        return PASS, f"search complete with {result.consistent_found} consistent column sets for D(2,1)", data
    return FAIL, "no consistent columns for a D(2,1) block", data


def _check_search_req_s(params: Dict[str, Any]) -> Outcome:
    result = decomp.exclusion_search_r2(decomp.REQ_S_R2_K14, _search_caps(params))
    data = _search_data(result)
    if result.consistent_found:
        return FAIL, "columns consistent with k(B) = 14 exist", data
    if result.status == decomp.INCONCLUSIVE:
        return INCONCLUSIVE, f"cap reached after {result.explored} nodes with nothing consistent", data
    return PASS, "k(B) = 14 is impossible for a D(2,2) block", data


# ---------- Catalog ----------

Grid = Callable[[int, int], List[Dict[str, Any]]]


@dataclass(frozen=True)
class CheckSpec:
    check_id: str
    run: Callable[[Dict[str, Any]], Outcome]
    schema: Dict[str, Any]
    grid: Grid
    search: bool = False


def _rs_grid(max_order: int) -> Grid:
    def grid(r_max: int, s_max: int) -> List[Dict[str, Any]]:
        return [{"r": r, "s": s} for r in range(2, r_max + 1) for s in range(1, min(r, s_max) + 1)
                if 1 << (r + s + 1) <= max_order]
    return grid


def _r_grid(low: int, high: int) -> Grid:
    def grid(r_max: int, s_max: int) -> List[Dict[str, Any]]:
        return [{"r": r} for r in range(max(2, low), min(r_max, high) + 1)]
    return grid


def _req_s_grid(high: int) -> Grid:
    def grid(r_max: int, s_max: int) -> List[Dict[str, Any]]:
        return [{"r": r} for r in range(2, min(r_max, s_max, high) + 1)]
    return grid


def _fixed(*param_sets: Dict[str, Any]) -> Grid:
    def grid(r_max: int, s_max: int) -> List[Dict[str, Any]]:
        return [dict(p) for p in param_sets]
    return grid


def _s_grid(low: int, high: int) -> Grid:
    def grid(r_max: int, s_max: int) -> List[Dict[str, Any]]:
        return [{"s": s} for s in range(low, min(r_max, high) + 1)]
    return grid


CATALOG: List[CheckSpec] = [
    CheckSpec("nf.arithmetic", _check_nf_arithmetic, RS_SCHEMA, _rs_grid(1024)),
    CheckSpec("lemma.characteristic", _check_characteristic, RS_SCHEMA, _rs_grid(1024)),
    CheckSpec("lemma.maxsubgroups", _check_maxsubgroups, RS_SCHEMA, _rs_grid(1024)),
    CheckSpec("lemma.classcount", _check_classcount, RS_SCHEMA, _rs_grid(1024)),
    CheckSpec("lemma.aut2group", _check_aut2group, RS_SCHEMA, _rs_grid(256)),
    CheckSpec("lemma.redei_family", _check_redei_family, N_SCHEMA, _fixed({"n": 4}, {"n": 6}, {"n": 9})),
    CheckSpec("group.quotients", _check_quotients, R_SCHEMA, _r_grid(2, 3)),
    CheckSpec("prop.a4_semidirect", _check_a4_semidirect, R_SCHEMA, _r_grid(2, 4)),
    CheckSpec("prop.fcentric", _check_fcentric, R_SCHEMA, _r_grid(2, 3)),
    CheckSpec("lemma.abelian_aut", _check_abelian_aut, FACTORS_SCHEMA,
              _fixed({"factors": [8, 2]}, {"factors": [4, 4]}, {"factors": [2]})),
    CheckSpec("lemma.fixedpoints.abelian", _check_fixed_points_abelian, S_SCHEMA,
              _fixed({"s": 1}, {"s": 2}, {"s": 3}, {"s": 4})),
    CheckSpec("lemma.fixedpoints.center", _check_fixed_points_center, R_SCHEMA, _req_s_grid(3)),
    CheckSpec("thm.fusion.forced", _check_fusion_forced, RS_SCHEMA, _rs_grid(32)),
    CheckSpec("thm.fusion.req_s", _check_fusion_req_s, R_SCHEMA, _req_s_grid(2)),
    CheckSpec("lemma.h1", _check_h1, NO_PARAMS, _fixed({})),
    CheckSpec("lemma.tset.rs1", _check_tset_rs1, R_SCHEMA, _r_grid(2, 6)),
    CheckSpec("lemma.tset.req_s", _check_tset_req_s, R_SCHEMA, _req_s_grid(4)),
    CheckSpec("thm.galois_orbits", _check_galois_orbits, R_SCHEMA, _r_grid(2, 6)),
    CheckSpec("lemma.chains", _check_chains, R_SCHEMA, _r_grid(2, 4)),
    CheckSpec("thm.invariants.rs1", _check_invariants_rs1, R_SCHEMA, _r_grid(2, 6)),
    CheckSpec("thm.invariants.req_s", _check_invariants_req_s, R_SCHEMA, _req_s_grid(5)),
    CheckSpec("lemma.invariants.eB3", _check_invariants_eb3, S_SCHEMA, _s_grid(0, 5)),
    CheckSpec("qf.classes", _check_qf_classes, DISC_SCHEMA, _fixed({"disc": -32}, {"disc": -4})),
    CheckSpec("qf.reduce", _check_qf_reduce, FORM_SCHEMA,
              _fixed({"a": 8, "b": 8, "c": 3}, {"a": 4, "b": 4, "c": 3}, {"a": 1, "b": 0, "c": 8})),
    CheckSpec("cartan.rs1", _check_cartan_rs1, R_SCHEMA, _r_grid(2, 8)),
    CheckSpec("cartan.congruence", _check_cartan_congruence, NO_PARAMS, _fixed({})),
    CheckSpec("cartan.req_s", _check_cartan_req_s, R_SCHEMA, _req_s_grid(8)),
    CheckSpec("cartan.r2_final", _check_cartan_final, NO_PARAMS, _fixed({})),
    CheckSpec("decomp.lemma_table", _check_lemma_table, R_SCHEMA, _r_grid(2, 5)),
    CheckSpec("decomp.divisibility", _check_divisibility, R_SCHEMA, _r_grid(2, 5)),
    CheckSpec("decomp.ordinary_cartan", _check_ordinary_cartan, R_SCHEMA, _r_grid(2, 5)),
    CheckSpec("decomp.contributions", _check_contributions, R_SCHEMA, _r_grid(2, 5)),
    CheckSpec("decomp.residue", _check_residue, R_SCHEMA, _r_grid(2, 8)),
    CheckSpec("search.rs1_r2", _check_search_rs1, SEARCH_SCHEMA, _fixed({}), search=True),
    CheckSpec("search.req_s_r2_k14", _check_search_req_s, SEARCH_SCHEMA, _fixed({}), search=True),
]

_BY_ID: Dict[str, CheckSpec] = {spec.check_id: spec for spec in CATALOG}


def list_checks() -> List[str]:
    return [spec.check_id for spec in CATALOG]


def get_check(check_id: str) -> CheckSpec:
    try:
        return _BY_ID[check_id]
    except KeyError:
        raise UnknownCheckError(check_id, list_checks())


def run_check(check_id: str, params: Optional[Dict[str, Any]] = None) -> CheckReport:
    """Validate params against the check's schema and run it.

    Raises:
        UnknownCheckError: check_id is not registered.
        InvalidParametersError: params fail the schema or the constructors.
        CapExceededError: the check would exceed a size cap.
    """
    spec = get_check(check_id)
    params = dict(params or {})
    try:
        validate(instance=params, schema=spec.schema)
    except ValidationError as e:
        raise InvalidParametersError(check_id, e.message)
    try:
        status, details, data = spec.run(params)
    except _Skip as skip:
        status, details, data = SKIP, str(skip), {}
    report = CheckReport(check_id=check_id, params=params, status=status, details=details, data=data)
    if status == FAIL:
        logger.error(f"{check_id} {params}: fail ({details})")
    elif status in (SKIP, INCONCLUSIVE):
        logger.warning(f"{check_id} {params}: {status} ({details})")
    else:
        logger.info(f"{check_id} {params}: {status}")
    return report


def verify_all(r_max: int, s_max: int, include_search: bool = False, workers: int = 1) -> List[CheckReport]:
    """Run the catalog over its parameter grids; reports come back in catalog order."""
    if r_max < 1 or s_max < 1:
        raise InvalidParametersError("verify_all", f"need r_max, s_max >= 1, got {r_max}, {s_max}")
    jobs = [(spec.check_id, params)
            for spec in CATALOG if include_search or not spec.search
            for params in spec.grid(r_max, s_max)]
    logger.info(f"verify_all: {len(jobs)} checks (r_max={r_max}, s_max={s_max}, search={include_search})")
    if workers <= 1:
        return [run_check(check_id, params) for check_id, params in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: run_check(*job), jobs))


def exit_code(reports: List[CheckReport]) -> int:
    return 1 if any(r.status == FAIL for r in reports) else 0


def reports_json(reports: List[CheckReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=get_env().json_indent, ensure_ascii=False)
