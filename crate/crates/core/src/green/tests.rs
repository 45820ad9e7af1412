use std::sync::Arc;

use num_traits::Zero;

use super::*;
use crate::grp::{are_isomorphic, catalog, catalog_up_to, direct_product, parse_group_spec, Group, GroupHom};
use crate::qburnside::MarkTable;
use crate::rational::{q, qf};
use crate::ops::elementary_ops;
use crate::shifted::Shifted;

fn g(s: &str) -> GroupRef {
    parse_group_spec(s).unwrap()
}

fn idem(gr: &GroupRef, i: usize) -> IdempotentRef {
    IdempotentRef::new(gr, i)
}

/// Same functor with the generic, formula-free operation paths.
struct Plain<'a>(&'a dyn GreenFunctor);

impl GreenFunctor for Plain<'_> {
    fn name(&self) -> String {
        self.0.name()
    }
    fn dim(&self, g: &GroupRef) -> usize {
        self.0.dim(g)
    }
    fn species(&self, g: &GroupRef) -> Arc<MarkTable> {
        self.0.species(g)
    }
    fn basis_labels(&self, g: &GroupRef) -> Vec<String> {
        self.0.basis_labels(g)
    }
    fn idempotent_labels(&self, g: &GroupRef) -> Vec<String> {
        self.0.idempotent_labels(g)
    }
    fn idempotent(&self, g: &GroupRef, i: usize) -> Vec<Q> {
        self.0.idempotent(g, i)
    }
    fn unit(&self, g: &GroupRef) -> Vec<Q> {
        self.0.unit(g)
    }
    fn mult(&self, g: &GroupRef, a: &[Q], b: &[Q]) -> Result<Vec<Q>> {
        self.0.mult(g, a, b)
    }
    fn apply(&self, op: &BisetOp, x: &[Q]) -> Result<Vec<Q>> {
        self.0.apply(op, x)
    }
    fn format(&self, g: &GroupRef, x: &[Q]) -> String {
        self.0.format(g, x)
    }
    fn to_json(&self, g: &GroupRef, x: &[Q]) -> serde_json::Value {
        self.0.to_json(g, x)
    }
}

/// A few deterministic elements with varied rational coefficients.
fn samples(n: usize) -> Vec<Vec<Q>> {
    (1..=3i64)
        .map(|s| (0..n as i64).map(|i| qf((i * 7 + s * 3) % 11 - 5, (i + s) % 4 + 1)).collect())
        .collect()
}

#[test]
fn presentations_verify() {
    for gr in catalog_up_to(16) {
        assert!(AlgebraPresentation::build(&Burnside, &gr).verify(&Burnside).unwrap().all(), "{}", gr.name());
    }
    for gr in catalog_up_to(8) {
        assert!(AlgebraPresentation::build(&SliceBurnside, &gr).verify(&SliceBurnside).unwrap().all(), "{}", gr.name());
    }
    let sh = Shifted::new(&g("C3")).unwrap();
    for gr in catalog_up_to(4) {
        assert!(AlgebraPresentation::build(&sh, &gr).verify(&sh).unwrap().all(), "{}", gr.name());
    }
}

#[test]
fn fast_paths_match_generic_paths() {
    let cases: [(&dyn GreenFunctor, usize); 2] = [(&Burnside, 12), (&SliceBurnside, 8)];
    for (inst, bound) in cases {
        let plain = Plain(inst);
        for gr in catalog_up_to(bound) {
            for op in elementary_ops(&gr) {
                let d = inst.dim(op.source());
                for i in 0..d {
                    assert_eq!(inst.op_on_idempotent(&op, i).unwrap(), plain.op_on_idempotent(&op, i).unwrap(), "{op} e_{i}");
                }
                for c in samples(d) {
                    assert_eq!(inst.op_in_idem(&op, &c).unwrap(), plain.op_in_idem(&op, &c).unwrap(), "{op}");
                }
            }
        }
    }
}

#[test]
fn frobenius_and_ring_maps() {
    for (inst, bound) in [(&Burnside as &dyn GreenFunctor, 12), (&SliceBurnside, 8)] {
        for gr in catalog_up_to(bound) {
            let lat = gr.lattice();
            let mut pairs = Vec::new();
            for c in lat.classes() {
                pairs.push((BisetOp::restriction(&gr, c.rep).unwrap(), BisetOp::induction(&gr, c.rep).unwrap()));
            }
            for n in lat.normal_subgroups() {
                pairs.push((BisetOp::inflation(&gr, n).unwrap(), BisetOp::deflation(&gr, n).unwrap()));
            }
            for (down, up) in pairs {
                // down: A(G) → A(X) is a ring map; up(a · down(b)) = up(a) · b
                let (big, small) = (down.source().clone(), down.target().clone());
                assert_eq!(inst.apply(&down, &inst.unit(&big)).unwrap(), inst.unit(&small));
                for a in samples(inst.dim(&small)) {
                    for b in samples(inst.dim(&big)) {
                        let rb = inst.apply(&down, &b).unwrap();
                        let lhs = inst.apply(&up, &inst.mult(&small, &a, &rb).unwrap()).unwrap();
                        let rhs = inst.mult(&big, &inst.apply(&up, &a).unwrap(), &b).unwrap();
                        assert_eq!(lhs, rhs, "{up} on {}", gr.name());
                        let ra = inst.apply(&down, &inst.apply(&up, &a).unwrap()).unwrap();
                        let prod = inst.mult(&big, &inst.apply(&up, &a).unwrap(), &b).unwrap();
                        assert_eq!(inst.apply(&down, &prod).unwrap(), inst.mult(&small, &ra, &rb).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn transport_examples() {
    let c2 = g("C2");
    let res = BisetOp::restriction(&c2, 0).unwrap();
    let t = transport(&Burnside, &res, 0).unwrap();
    assert_eq!((t.coeffs, t.shape), (vec![q(1)], Shape::ZeroOneSum));
    let ind = BisetOp::induction(&c2, 0).unwrap();
    let t = transport(&Burnside, &ind, 0).unwrap();
    assert_eq!((t.coeffs, t.shape), (vec![q(2), q(0)], Shape::ScalarTimesSingle));
    let t = transport(&Burnside, &res, 1).unwrap();
    assert_eq!((t.coeffs, t.shape), (vec![q(0)], Shape::Zero));
}

#[test]
fn classify_rejects_wrong_shapes() {
    let c2 = g("C2");
    let res = BisetOp::restriction(&c2, 0).unwrap();
    assert!(matches!(transport::classify(&res, &[qf(1, 2)]), Err(Error::ShapeViolation { .. })));
    let ind = BisetOp::induction(&c2, 0).unwrap();
    assert!(transport::classify(&ind, &[q(1), q(1)]).is_err());
    let iso = BisetOp::iso(GroupHom::identity(&c2)).unwrap();
    assert!(transport::classify(&iso, &[q(2), q(0)]).is_err());
}

#[test]
fn no_shape_violations() {
    let cases: [(&dyn GreenFunctor, usize); 2] = [(&Burnside, 24), (&SliceBurnside, 12)];
    for (inst, bound) in cases {
        for gr in catalog_up_to(bound) {
            for op in elementary_ops(&gr) {
                for i in 0..inst.dim(op.source()) {
                    transport(inst, &op, i).unwrap();
                }
            }
        }
    }
}

#[test]
fn e_set_examples() {
    let c2 = g("C2");
    assert_eq!(underline_e(&Burnside, &c2).unwrap(), vec![1]);
    // both idempotents of C2 survive deflation to 1: Def(e_1) = Def(e_C2) = 1/2
    assert!(double_underline_e(&Burnside, &c2).unwrap().is_empty());
    let def = BisetOp::deflation(&c2, 1).unwrap();
    let free = crate::gsets::coset_gset(&c2, c2.lattice().subgroup(0).bits()).unwrap();
    let orbits = crate::gsets::tensor(&crate::gsets::elementary_biset(&def), &free).unwrap().size();
    assert_eq!(orbits, 1);
    assert_eq!(Burnside.op_on_idempotent(&def, 0).unwrap(), vec![qf(orbits as i64, 2)]);
    assert_eq!(Burnside.op_on_idempotent(&def, 1).unwrap(), vec![qf(1, 2)]);
    let one = Group::trivial();
    assert_eq!(underline_e(&Burnside, &one).unwrap(), vec![0]);
    assert_eq!(double_underline_e(&Burnside, &one).unwrap(), vec![0]);
    assert!(underline_e(&SliceBurnside, &c2).unwrap().contains(&1));
    assert!(double_underline_e(&SliceBurnside, &c2).unwrap().contains(&1));
}

#[test]
fn reduced_e_sets_match_full_quantifiers() {
    let cases: [(&dyn GreenFunctor, usize); 2] = [(&Burnside, 12), (&SliceBurnside, 12)];
    for (inst, bound) in cases {
        for gr in catalog_up_to(bound) {
            assert_eq!(underline_e(inst, &gr).unwrap(), underline_e_full(inst, &gr).unwrap(), "{}", gr.name());
            assert_eq!(double_underline_e(inst, &gr).unwrap(), double_underline_e_full(inst, &gr).unwrap(), "{}", gr.name());
        }
    }
}

#[test]
fn mc_examples() {
    let r = is_mc_group(&Burnside, &g("V4")).unwrap();
    assert!(r.is_mc);
    assert_eq!(r.witnesses, vec![4]);
    assert!(!is_mc_group(&Burnside, &g("C2")).unwrap().is_mc);
    let r = is_mc_group(&SliceBurnside, &g("C2")).unwrap();
    assert_eq!(r.witnesses, vec![1]);
}

#[test]
fn burnside_mc_groups_are_b_groups() {
    for gr in catalog() {
        let b = crate::qburnside::is_b_group(gr).is_b_group;
        assert_eq!(is_mc_group(&Burnside, gr).unwrap().is_mc, b, "{}", gr.name());
    }
}

#[test]
fn slice_mc_groups_have_t_slices() {
    for gr in catalog_up_to(16) {
        let t = !crate::slice::t_slices(&gr).is_empty();
        assert_eq!(is_mc_group(&SliceBurnside, &gr).unwrap().is_mc, t, "{}", gr.name());
    }
}

#[test]
fn reduction_examples() {
    for gr in catalog_up_to(8) {
        let r = reduce_res_ind(&Burnside, &idem(&gr, 0)).unwrap();
        assert_eq!(r.subgroup, 0);
        assert_eq!(r.alpha, qf(1, gr.order() as i64));
        let m = reduce_to_mc(&Burnside, &idem(&gr, 0)).unwrap();
        assert_eq!(m.result, idem(&Group::trivial(), 0));
    }
    let v4 = g("V4");
    let r = reduce_res_ind(&Burnside, &idem(&v4, 4)).unwrap();
    assert_eq!((r.target.clone(), r.alpha), (idem(&v4, 4), q(1)));
    let d = reduce_def_inf(&Burnside, &idem(&v4, 4)).unwrap();
    assert_eq!((d.normal, d.target, d.alpha), (0, idem(&v4, 4), q(1)));
    assert_eq!(reduce_to_mc(&Burnside, &idem(&v4, 4)).unwrap().result, idem(&v4, 4));

    let s3 = g("S3");
    let r = reduce_res_ind(&Burnside, &idem(&s3, 1)).unwrap();
    assert_eq!(r.target.group.order(), 2);
    assert_eq!(r.target.index, 1);
    assert!(!r.alpha.is_zero());

    let c2 = g("C2");
    let d = reduce_def_inf(&Burnside, &idem(&c2, 1)).unwrap();
    assert_eq!((d.target, d.alpha), (idem(&Group::trivial(), 0), q(2)));
    assert_eq!(reduce_to_mc(&Burnside, &idem(&c2, 1)).unwrap().result, idem(&Group::trivial(), 0));
    let one = Group::trivial();
    let d = reduce_def_inf(&Burnside, &idem(&one, 0)).unwrap();
    assert_eq!((d.target, d.alpha), (idem(&one, 0), q(1)));
}

fn equivalent(inst: &dyn GreenFunctor, a: &IdempotentRef, b: &IdempotentRef) -> bool {
    dominates(inst, a, b).unwrap() && dominates(inst, b, a).unwrap()
}

/// Groups and the largest `|H×K|` at which ideal checks run; slice
/// evaluations at order 64 are out of reach.
const IDEAL_CASES: [(&dyn GreenFunctor, usize, usize); 2] = [(&Burnside, 12, 144), (&SliceBurnside, 8, 36)];

#[test]
fn reduction_preserves_ideals() {
    for (inst, bound, cap) in IDEAL_CASES {
        for gr in catalog_up_to(bound) {
            for i in 0..inst.dim(&gr) {
                let e = idem(&gr, i);
                let m = reduce_to_mc(inst, &e).unwrap();
                if gr.order() * m.result.group.order() <= cap {
                    assert!(equivalent(inst, &e, &m.result), "{} e_{i}", gr.name());
                }
            }
        }
    }
}

#[test]
fn reduction_choices_agree() {
    // every minimal H with Res(e) ≠ 0 and every maximal N with Def(e) ≠ 0
    // lead to the same ideal
    for (inst, bound, cap) in IDEAL_CASES {
        for gr in catalog_up_to(bound) {
            let lat = gr.lattice();
            for i in 0..inst.dim(&gr) {
                let e = idem(&gr, i);
                let live: Vec<(usize, usize)> = lat
                    .classes()
                    .iter()
                    .filter_map(|c| {
                        let t = transport(inst, &BisetOp::restriction(&gr, c.rep).unwrap(), i).unwrap().coeffs;
                        t.iter().position(|x| !x.is_zero()).map(|j| (c.rep, j))
                    })
                    .collect();
                let min_order = live.iter().map(|&(h, _)| lat.subgroup(h).order()).min().unwrap();
                for &(h, j) in live.iter().filter(|&&(h, _)| lat.subgroup(h).order() == min_order) {
                    let sub = BisetOp::restriction(&gr, h).unwrap().target().clone();
                    if gr.order() * sub.order() <= cap {
                        assert!(equivalent(inst, &e, &idem(&sub, j)));
                    }
                }
                let defs: Vec<(usize, IdempotentRef)> = lat
                    .normal_subgroups()
                    .into_iter()
                    .filter_map(|n| {
                        let op = BisetOp::deflation(&gr, n).unwrap();
                        let t = transport(inst, &op, i).unwrap().coeffs;
                        t.iter().position(|x| !x.is_zero()).map(|j| (n, idem(op.target(), j)))
                    })
                    .collect();
                for (n, r) in &defs {
                    let maximal = !defs.iter().any(|(m, _)| m != n && lat.is_below(*n, *m));
                    if maximal && gr.order() * r.group.order() <= cap {
                        assert!(equivalent(inst, &e, r));
                    }
                }
            }
        }
    }
}

fn basis_vectors(n: usize) -> Vec<Vec<Q>> {
    (0..n).map(|i| indicator(n, i)).collect()
}

#[test]
fn composition_identity_laws() {
    let c2 = g("C2");
    let c2c2 = direct_product(&c2, &c2).unwrap().group;
    for inst in [&Burnside as &dyn GreenFunctor, &SliceBurnside] {
        let id = identity_morphism(inst, &c2).unwrap();
        for beta in basis_vectors(inst.dim(&c2c2)).into_iter().chain(samples(inst.dim(&c2c2))) {
            assert_eq!(compose(inst, &c2, &c2, &c2, &id, &beta).unwrap(), beta);
            assert_eq!(compose(inst, &c2, &c2, &c2, &beta, &id).unwrap(), beta);
        }
    }
    let one = Group::trivial();
    let id1 = identity_morphism(&Burnside, &one).unwrap();
    assert_eq!(id1, vec![q(1)]);
    for alpha in samples(Burnside.dim(&c2)) {
        assert_eq!(compose(&Burnside, &c2, &one, &one, &alpha, &id1).unwrap(), alpha);
    }
}

#[test]
fn composition_is_associative() {
    let c2 = g("C2");
    let one = Group::trivial();
    let c2c2 = direct_product(&c2, &c2).unwrap().group;
    for inst in [&Burnside as &dyn GreenFunctor, &SliceBurnside] {
        let s = samples(inst.dim(&c2c2));
        for a in &s {
            for b in &s {
                for c in &s {
                    let l = compose(inst, &c2, &c2, &c2, &compose(inst, &c2, &c2, &c2, a, b).unwrap(), c).unwrap();
                    let r = compose(inst, &c2, &c2, &c2, a, &compose(inst, &c2, &c2, &c2, b, c).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
        // mixed groups: C2 ← 1 ← C2 ← 1, with A(C2×1) = A(1×C2) = A(C2)
        let x = samples(inst.dim(&c2));
        let ab = compose(inst, &c2, &one, &c2, &x[0], &x[1]).unwrap();
        let l = compose(inst, &c2, &c2, &one, &ab, &x[2]).unwrap();
        let bc = compose(inst, &one, &c2, &one, &x[1], &x[2]).unwrap();
        let r = compose(inst, &c2, &one, &one, &x[0], &bc).unwrap();
        assert_eq!(l, r);
    }
}

#[test]
fn principal_ideal_examples() {
    let unit = idem(&Group::trivial(), 0);
    for gr in catalog_up_to(8) {
        for inst in [&Burnside as &dyn GreenFunctor, &SliceBurnside] {
            let p = principal_ideal_eval(inst, &unit, &gr).unwrap();
            assert_eq!(p.space.rank(), inst.dim(&gr));
        }
    }
    let v4 = g("V4");
    let e = idem(&v4, 4);
    assert_eq!(principal_ideal_eval(&Burnside, &e, &g("C2")).unwrap().space.rank(), 0);
    let p = principal_ideal_eval(&Burnside, &e, &v4).unwrap();
    assert_eq!(p.support, vec![4]);
}

#[test]
fn domination_examples() {
    let v4 = g("V4");
    let one = Group::trivial();
    for gr in catalog_up_to(8) {
        for i in 0..Burnside.dim(&gr) {
            assert!(dominates(&Burnside, &idem(&gr, i), &idem(&gr, i)).unwrap());
        }
    }
    assert!(dominates(&Burnside, &idem(&v4, 4), &idem(&one, 0)).unwrap());
    assert!(!dominates(&Burnside, &idem(&one, 0), &idem(&v4, 4)).unwrap());
    assert!(!dominates_via_ideal(&Burnside, &idem(&one, 0), &idem(&v4, 4)).unwrap());
}

fn all_refs(inst: &dyn GreenFunctor, groups: &[GroupRef]) -> Vec<IdempotentRef> {
    groups.iter().flat_map(|gr| (0..inst.dim(gr)).map(move |i| idem(gr, i))).collect()
}

#[test]
fn domination_routes_agree() {
    for inst in [&Burnside as &dyn GreenFunctor, &SliceBurnside] {
        let groups = catalog_up_to(18);
        for b in all_refs(inst, &groups) {
            for gr in groups.iter().filter(|gr| gr.order() * b.group.order() <= 36) {
                let support = ideal_support(inst, &b, gr).unwrap();
                let ideal = principal_ideal_eval(inst, &b, gr).unwrap();
                assert_eq!(support, ideal.support, "{} e_{} at {}", b.group.name(), b.index, gr.name());
                for i in 0..inst.dim(gr).min(3) {
                    assert_eq!(dominates(inst, &idem(gr, i), &b).unwrap(), support.contains(&i));
                }
            }
        }
    }
}

#[test]
fn domination_is_a_preorder() {
    for inst in [&Burnside as &dyn GreenFunctor, &SliceBurnside] {
        let refs = all_refs(inst, &catalog_up_to(4));
        let rel: Vec<Vec<bool>> = refs.iter().map(|a| refs.iter().map(|b| dominates(inst, a, b).unwrap()).collect()).collect();
        for i in 0..refs.len() {
            assert!(rel[i][i]);
            for j in 0..refs.len() {
                for k in 0..refs.len() {
                    if rel[i][j] && rel[j][k] {
                        assert!(rel[i][k]);
                    }
                }
            }
        }
    }
}

fn is_quotient_of(h: &GroupRef, k: &GroupRef) -> bool {
    let lat = h.lattice();
    lat.normal_subgroups().into_iter().any(|n| {
        lat.subgroup(n).order() * k.order() == h.order()
            && are_isomorphic(&crate::grp::quotient(h, lat.subgroup(n).bits()).unwrap().0, k).is_some()
    })
}

#[test]
fn burnside_domination_is_quotient_order_on_b_groups() {
    let bgroups: Vec<GroupRef> = catalog_up_to(12).into_iter().filter(|gr| crate::qburnside::is_b_group(gr).is_b_group).collect();
    for h in &bgroups {
        for k in &bgroups {
            let (eh, ek) = (idem(h, Burnside.dim(h) - 1), idem(k, Burnside.dim(k) - 1));
            assert_eq!(dominates(&Burnside, &eh, &ek).unwrap(), is_quotient_of(h, k), "{} {}", h.name(), k.name());
        }
    }
}

#[test]
fn minimal_group_examples() {
    let unit = idem(&Group::trivial(), 0);
    let found = minimal_groups_of_ideal(&Burnside, &[unit], 8).unwrap();
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].order(), 1);
    let v4 = g("V4");
    let found = minimal_groups_of_ideal(&Burnside, &[idem(&v4, 4)], 8).unwrap();
    assert_eq!(found.len(), 1);
    assert!(are_isomorphic(&found[0], &v4).is_some());
    assert!(minimal_groups_of_ideal(&Burnside, &[], 8).unwrap().is_empty());
    let found = minimal_groups_of_ideal(&SliceBurnside, &[idem(&g("C2"), 1)], 8).unwrap();
    assert_eq!(found[0].order(), 2);
}

#[test]
fn functor_spec_parsing() {
    assert_eq!("burnside".parse::<FunctorSpec>().unwrap(), FunctorSpec::Burnside);
    assert_eq!("shifted:C2".parse::<FunctorSpec>().unwrap(), FunctorSpec::Shifted("C2".into()));
    assert!(matches!("shifted:".parse::<FunctorSpec>(), Err(Error::Usage(_))));
    assert!(matches!("mackey".parse::<FunctorSpec>(), Err(Error::Usage(_))));
    assert_eq!(FunctorSpec::Shifted("C2".into()).instance().unwrap().name(), "shifted:C2");
    assert!(!IdempotentCheck { idempotent: true, orthogonal: true, complete: true, diagonalizes: false }.all());
}
