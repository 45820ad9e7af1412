//! Self-checks run by `green-ideals verify`: each suite counts its cases and
//! collects failures instead of stopping at the first one.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::green::{
    dominates, is_mc_group, principal_ideal_eval, transport, AlgebraPresentation, GreenFunctor, IdempotentRef,
};
use crate::grp::{catalog_up_to, GroupRef};
use crate::gsets::{coset_gset, decompose_morphism, elementary_biset, gmor_tensor, orbit_decompose, tensor, GMap};
use crate::lattice::{build_poset, verify_lattice_iso, CLOSED_SET_LIMIT};
use crate::ops::{elementary_ops, BisetOp};
use crate::qburnside::{self, is_b_group, BurnsideElt};
use crate::shifted::{is_mc_group_shifted, Shifted};
use crate::slice::{self, t_slices, SliceElt};

/// Largest order for the G-set oracle comparison.
pub const ORACLE_BOUND: usize = 12;

/// Largest `|H×K|` for comparing the two domination routes.
pub const ROUTE_PRODUCT: usize = 36;

#[derive(Debug, Clone, Default, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<String>,
    /// Why the suite did not run, if it did not.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> SuiteReport {
        SuiteReport { suite: suite.into(), ..Default::default() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    /// Records an error as a failed case.
    fn absorb<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.cases += 1;
                self.failures.push(format!("{}: {e}", what()));
                None
            }
        }
    }
}

fn presentations(inst: &dyn GreenFunctor, groups: &[GroupRef]) -> SuiteReport {
    let mut r = SuiteReport::new("idempotents");
    for g in groups {
        let p = AlgebraPresentation::build(inst, g);
        if let Some(c) = r.absorb(p.verify(inst), || g.name().to_string()) {
            r.check(c.all(), || format!("{}: {c:?}", g.name()));
        }
    }
    r
}

/// Closed-form operations against the tensor product with the elementary biset.
pub fn oracle_mismatches(op: &BisetOp) -> Result<Vec<String>> {
    let b = elementary_biset(op);
    let src = op.source();
    let lat = src.lattice();
    let mut out = Vec::new();
    for c in 0..lat.classes().len() {
        let x = coset_gset(src, lat.subgroup(lat.class_rep(c)).bits())?;
        if orbit_decompose(&tensor(&b, &x)?) != qburnside::elementary_op(op, &BurnsideElt::basis_element(src, c))? {
            out.push(format!("{op} on [{}/{}]", src.name(), c));
        }
    }
    for (c, cls) in src.slice_classes().classes().iter().enumerate() {
        let f = GMap::coset_projection(src, lat.subgroup(cls.t).bits(), lat.subgroup(cls.s).bits())?;
        if decompose_morphism(&gmor_tensor(&b, &f)?) != slice::elementary_op(op, &SliceElt::basis_element(src, c))? {
            out.push(format!("{op} on slice class {c} of {}", src.name()));
        }
    }
    Ok(out)
}

fn oracle(groups: &[GroupRef]) -> SuiteReport {
    let mut r = SuiteReport::new("oracle");
    for g in groups.iter().filter(|g| g.order() <= ORACLE_BOUND) {
        for op in elementary_ops(g) {
            if let Some(bad) = r.absorb(oracle_mismatches(&op), || format!("{op}")) {
                r.check(bad.is_empty(), || bad.join("; "));
            }
        }
    }
    r
}

fn shapes(inst: &dyn GreenFunctor, groups: &[GroupRef]) -> SuiteReport {
    let mut r = SuiteReport::new("shapes");
    for g in groups {
        for op in elementary_ops(g) {
            for i in 0..inst.dim(op.source()) {
                let t = transport(inst, &op, i);
                r.check(t.is_ok(), || format!("{op} on e_{i}: {}", t.err().map(|e| e.to_string()).unwrap_or_default()));
            }
        }
    }
    r
}

fn mc_criteria(inst: &dyn GreenFunctor, shifted_k: Option<&GroupRef>, groups: &[GroupRef]) -> SuiteReport {
    let mut r = SuiteReport::new("mc-criterion");
    for g in groups {
        let Some(generic) = r.absorb(is_mc_group(inst, g), || g.name().to_string()) else { continue };
        let special = match (inst.name().as_str(), shifted_k) {
            ("burnside", _) => is_b_group(g).is_b_group,
            ("slice", _) => !t_slices(g).is_empty(),
            (_, Some(k)) => match r.absorb(is_mc_group_shifted(k, g), || g.name().to_string()) {
                Some(rep) => rep.is_mc,
                None => continue,
            },
            _ => continue,
        };
        r.check(generic.is_mc == special, || format!("{}: generic {} vs closed criterion {special}", g.name(), generic.is_mc));
    }
    r
}

fn domination_routes(inst: &dyn GreenFunctor, groups: &[GroupRef]) -> SuiteReport {
    let mut r = SuiteReport::new("domination");
    let mut pairs = Vec::new();
    for g in groups {
        if let Some(rep) = r.absorb(is_mc_group(inst, g), || g.name().to_string()) {
            pairs.extend(rep.witnesses.into_iter().map(|i| IdempotentRef::new(g, i)));
        }
    }
    for a in &pairs {
        for b in pairs.iter().filter(|b| a.group.order() * b.group.order() <= ROUTE_PRODUCT) {
            let lhs = dominates(inst, a, b);
            let rhs = principal_ideal_eval(inst, b, &a.group).map(|p| p.support.contains(&a.index));
            let what = || format!("{}:e_{} over {}:e_{}", a.group.name(), a.index, b.group.name(), b.index);
            if let (Some(x), Some(y)) = (r.absorb(lhs, what), r.absorb(rhs, what)) {
                r.check(x == y, what);
            }
        }
    }
    // the Burnside poset builder cross-checks against quotients itself
    if inst.name() == "burnside" {
        let bound = groups.iter().map(|g| g.order()).max().unwrap_or(1);
        let built = build_poset(inst, bound);
        r.check(built.is_ok(), || format!("quotient cross-check: {}", built.err().map(|e| e.to_string()).unwrap_or_default()));
    }
    r
}

fn lattice(inst: &dyn GreenFunctor, max_order: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("lattice");
    match verify_lattice_iso(inst, max_order, CLOSED_SET_LIMIT) {
        Ok(rep) => {
            for c in rep.checks {
                r.check(c.passed, || c.name.clone());
            }
        }
        Err(Error::Resource { what, .. }) => r.skipped = Some(what),
        Err(e) => r.absorb::<()>(Err(e), || "lattice".into()).unwrap_or(()),
    }
    Ok(r)
}

/// Every suite that applies to the functor, on catalog groups up to `max_order`.
pub fn run(inst: &dyn GreenFunctor, shifted_k: Option<&GroupRef>, max_order: usize) -> Result<Vec<SuiteReport>> {
    let groups = catalog_up_to(max_order);
    for g in &groups {
        inst.admit(g)?;
    }
    let mut out = vec![presentations(inst, &groups)];
    if shifted_k.is_none() {
        out.push(oracle(&groups));
    }
    out.push(shapes(inst, &groups));
    out.push(mc_criteria(inst, shifted_k, &groups));
    out.push(domination_routes(inst, &groups));
    out.push(lattice(inst, max_order)?);
    Ok(out)
}

/// The shifted functor for `K`, with `K` kept for the closed MC criterion.
pub fn run_shifted(k: &GroupRef, max_order: usize) -> Result<Vec<SuiteReport>> {
    run(&Shifted::new(k)?, Some(k), max_order)
}
