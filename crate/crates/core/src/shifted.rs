//! The shifted Burnside functor `G ↦ ℚB(G×K)`, groups over `K`, B_K-groups
//! and the MC-group criterion through Goursat data.

use std::sync::Arc;

use num_traits::Zero;
use serde_json::Value;

use crate::bits::Bits;
use crate::error::{validation, Error, Result};
use crate::green::{Burnside, GreenFunctor};
use crate::grp::{caps, direct_product, find_isomorphism_with, quotient, subgroup_group, GroupHom, GroupRef};
use crate::labels::{class_labels, display_name};
use crate::ops::BisetOp;
use crate::qburnside::{self, MarkTable};
use crate::rational::Q;

/// `A_K(G) = ℚB(G×K)`; operations act as `U × K`, and the product of
/// `A_K(G)` is the product of `ℚB(G×K)`.
#[derive(Debug, Clone)]
pub struct Shifted {
    k: GroupRef,
}

impl Shifted {
    pub fn new(k: &GroupRef) -> Result<Shifted> {
        crate::grp::check_cap(format!("shifting group {}", k.name()), k.order(), caps().base)?;
        Ok(Shifted { k: k.clone() })
    }

    pub fn k(&self) -> &GroupRef {
        &self.k
    }

    /// The group `G×K` whose Burnside algebra is the evaluation at `G`.
    pub fn evaluation_group(&self, g: &GroupRef) -> Result<GroupRef> {
        Ok(direct_product(g, &self.k)?.group)
    }

    fn ev(&self, g: &GroupRef) -> GroupRef {
        self.evaluation_group(g).expect("evaluation group within the product cap")
    }

    fn lift(&self, op: &BisetOp) -> Result<BisetOp> {
        op.times(&self.k)
    }
}

impl GreenFunctor for Shifted {
    fn name(&self) -> String {
        format!("shifted:{}", self.k.name())
    }

    fn admit(&self, g: &GroupRef) -> Result<()> {
        self.evaluation_group(g).map(|_| ())
    }

    fn dim(&self, g: &GroupRef) -> usize {
        Burnside.dim(&self.ev(g))
    }

    fn species(&self, g: &GroupRef) -> Arc<MarkTable> {
        qburnside::mark_table(&self.ev(g))
    }

    fn basis_labels(&self, g: &GroupRef) -> Vec<String> {
        Burnside.basis_labels(&self.ev(g))
    }

    fn idempotent_labels(&self, g: &GroupRef) -> Vec<String> {
        class_labels(&self.ev(g)).iter().map(|l| format!("e_{l}")).collect()
    }

    fn idempotent(&self, g: &GroupRef, i: usize) -> Vec<Q> {
        Burnside.idempotent(&self.ev(g), i)
    }

    fn unit(&self, g: &GroupRef) -> Vec<Q> {
        Burnside.unit(&self.ev(g))
    }

    fn mult(&self, g: &GroupRef, a: &[Q], b: &[Q]) -> Result<Vec<Q>> {
        Burnside.mult(&self.evaluation_group(g)?, a, b)
    }

    fn apply(&self, op: &BisetOp, x: &[Q]) -> Result<Vec<Q>> {
        Burnside.apply(&self.lift(op)?, x)
    }

    fn format(&self, g: &GroupRef, x: &[Q]) -> String {
        Burnside.format(&self.ev(g), x)
    }

    fn to_json(&self, g: &GroupRef, x: &[Q]) -> Value {
        Burnside.to_json(&self.ev(g), x)
    }

    fn op_on_idempotent(&self, op: &BisetOp, i: usize) -> Result<Vec<Q>> {
        Burnside.op_on_idempotent(&self.lift(op)?, i)
    }

    fn op_in_idem(&self, op: &BisetOp, c: &[Q]) -> Result<Vec<Q>> {
        Burnside.op_in_idem(&self.lift(op)?, c)
    }
}

/// A group `L` with a homomorphism `φ: L → K`.
#[derive(Debug, Clone)]
pub struct GroupOverK {
    pub group: GroupRef,
    pub phi: GroupHom,
}

impl GroupOverK {
    pub fn new(phi: GroupHom) -> GroupOverK {
        GroupOverK { group: phi.source().clone(), phi }
    }

    pub fn k(&self) -> &GroupRef {
        self.phi.target()
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({"L": display_name(&self.group), "phi": self.phi.images()})
    }
}

/// Projections and kernels of `X ≤ G×K`, as subgroup indices of `G` and `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoursatData {
    pub p1: usize,
    pub p2: usize,
    pub k1: usize,
    pub k2: usize,
}

pub fn subgroup_to_pair(g: &GroupRef, k: &GroupRef, x: &Bits) -> Result<GoursatData> {
    let n = k.order();
    if x.iter().any(|e| e >= g.order() * n) || !x.contains(0) {
        return validation("subgroup does not live in G×K");
    }
    let (gl, kl) = (g.lattice(), k.lattice());
    let p1 = Bits::from_iter(g.order(), x.iter().map(|e| e / n));
    let p2 = Bits::from_iter(n, x.iter().map(|e| e % n));
    let k1 = Bits::from_iter(g.order(), x.iter().filter(|e| e % n == 0).map(|e| e / n));
    let k2 = Bits::from_iter(n, x.iter().filter(|e| e / n == 0).map(|e| e % n));
    let idx = |lat: &crate::grp::SubgroupLattice, b: &Bits| lat.index_of_checked(b);
    Ok(GoursatData { p1: idx(gl, &p1)?, p2: idx(kl, &p2)?, k1: idx(gl, &k1)?, k2: idx(kl, &k2)? })
}

/// `L_φ = {(l, φ(l))} ≤ L×K`.
pub fn pair_to_subgroup(pair: &GroupOverK) -> Bits {
    let n = pair.k().order();
    Bits::from_iter(pair.group.order() * n, (0..pair.group.order()).map(|l| l * n + pair.phi.apply(l)))
}

/// `(X, p₂|_X)` for `X ≤ L×K`.
pub fn subgroup_over_k(l: &GroupRef, k: &GroupRef, x: &Bits) -> Result<GroupOverK> {
    let lk = direct_product(l, k)?;
    let (xg, incl) = subgroup_group(&lk.group, x)?;
    Ok(GroupOverK::new(lk.proj2.after(&incl).with_groups(xg, k.clone())))
}

fn kernel_normals(pair: &GroupOverK) -> Vec<usize> {
    let lat = pair.group.lattice();
    let ker = pair.phi.kernel();
    lat.normal_subgroups().into_iter().filter(|&n| n != 0 && lat.subgroup(n).bits().is_subset(&ker)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BkReport {
    pub is_bk: bool,
    /// Nontrivial normal `N ≤ Ker φ` with `m_{L,N} ≠ 0`.
    pub witnesses: Vec<(usize, Q)>,
}

pub fn is_bk_group(pair: &GroupOverK) -> BkReport {
    let witnesses: Vec<(usize, Q)> = kernel_normals(pair)
        .into_iter()
        .filter_map(|n| {
            let m = qburnside::m_constant(&pair.group, n).expect("normal");
            (!m.is_zero()).then_some((n, m))
        })
        .collect();
    BkReport { is_bk: witnesses.is_empty(), witnesses }
}

/// `(L/N, φ/N)` for a normal `N ≤ Ker φ`.
pub fn quotient_pair(pair: &GroupOverK, n: &Bits) -> Result<GroupOverK> {
    if !n.is_subset(&pair.phi.kernel()) {
        return validation("quotient over K needs N inside the kernel");
    }
    let (q, proj) = quotient(&pair.group, n)?;
    let mut images = vec![0u32; q.order()];
    for x in 0..pair.group.order() {
        images[proj.apply(x)] = pair.phi.apply(x) as u32;
    }
    Ok(GroupOverK::new(GroupHom::new(q, pair.k().clone(), images)?))
}

/// Normal `Q ≤ Ker φ` maximal with `m_{L,Q} ≠ 0` (`Q = 1` qualifies).
fn beta_candidates(pair: &GroupOverK) -> Vec<usize> {
    let lat = pair.group.lattice();
    let mut cands: Vec<usize> = vec![0];
    for n in kernel_normals(pair) {
        if !qburnside::m_constant(&pair.group, n).expect("normal").is_zero() {
            cands.push(n);
        }
    }
    let maximal: Vec<usize> = cands
        .iter()
        .copied()
        .filter(|&a| !cands.iter().any(|&b| b != a && lat.is_below(a, b)))
        .collect();
    let mut maximal = maximal;
    maximal.sort_by_key(|&n| (std::cmp::Reverse(lat.subgroup(n).order()), n));
    maximal
}

/// `β_K(L, φ)`: the quotient by a maximal normal `Q ≤ Ker φ` with
/// `m_{L,Q} ≠ 0`. All maximal choices are checked to agree up to isomorphism
/// over `K`.
pub fn beta_k(pair: &GroupOverK) -> Result<GroupOverK> {
    let lat = pair.group.lattice();
    let cands = beta_candidates(pair);
    let first = quotient_pair(pair, lat.subgroup(cands[0]).bits())?;
    for &other in &cands[1..] {
        let q = quotient_pair(pair, lat.subgroup(other).bits())?;
        if !iso_over_k(&first, &q) {
            return Err(Error::Assertion(format!("β_K of {} depends on the choice of quotient", pair.group.name())));
        }
    }
    Ok(first)
}

/// An isomorphism `f: L → L'` with `i ∘ φ = φ' ∘ f` for an inner automorphism `i` of `K`.
pub fn iso_over_k(a: &GroupOverK, b: &GroupOverK) -> bool {
    let k = a.k();
    if k != b.k() || a.group.order() != b.group.order() {
        return false;
    }
    if a.phi.image_set(&Bits::from_iter(a.group.order(), 0..a.group.order())).count()
        != b.phi.image_set(&Bits::from_iter(b.group.order(), 0..b.group.order())).count()
    {
        return false;
    }
    let mut seen: Vec<Vec<u32>> = Vec::new();
    for t in 0..k.order() {
        // distinct inner automorphisms only
        let inner: Vec<u32> = (0..k.order()).map(|x| k.conj(t, x) as u32).collect();
        if seen.contains(&inner) {
            continue;
        }
        let found = find_isomorphism_with(&a.group, &b.group, |x, y| b.phi.apply(y) == inner[a.phi.apply(x)] as usize);
        if found.is_some() {
            return true;
        }
        seen.push(inner);
    }
    false
}

/// `(L, φ) ↠ (L', φ')`: a surjection `f` with `i ∘ φ = φ' ∘ f` for some inner `i`.
pub fn quotient_over_k(a: &GroupOverK, b: &GroupOverK) -> Result<bool> {
    if !a.group.order().is_multiple_of(b.group.order()) || a.k() != b.k() {
        return Ok(false);
    }
    let lat = a.group.lattice();
    let ker = a.phi.kernel();
    let want = a.group.order() / b.group.order();
    for n in lat.normal_subgroups() {
        let nb = lat.subgroup(n).bits();
        if lat.subgroup(n).order() != want || !nb.is_subset(&ker) {
            continue;
        }
        if iso_over_k(&quotient_pair(a, nb)?, b) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Subgroup class of `L_φ` in `L×K`: the idempotent `e_{L,φ}` of `A_K(L)`.
pub fn graph_class(pair: &GroupOverK) -> Result<usize> {
    let lk = direct_product(&pair.group, pair.k())?.group;
    let lat = lk.lattice();
    Ok(lat.class_of(lat.index_of_checked(&pair_to_subgroup(pair))?))
}

/// Certificate that `e_{L,φ}` and `e_{β_K(L,φ)}` generate the same ideal of
/// `ℚB_K`: `Def^L_{L/Q}(e_{L,φ}) = λ·e_{L/Q,φ̄}` with `λ ≠ 0`, and
/// `e_{L,φ} · Inf^L_{L/Q}(e_{L/Q,φ̄}) = e_{L,φ}`. Returns `λ`.
pub fn beta_certificate(pair: &GroupOverK) -> Result<Q> {
    let lat = pair.group.lattice();
    let q = beta_candidates(pair)[0];
    let beta = quotient_pair(pair, lat.subgroup(q).bits())?;
    let sh = Shifted::new(pair.k())?;
    let (from, to) = (graph_class(pair)?, graph_class(&beta)?);
    let def = sh.op_on_idempotent(&BisetOp::deflation(&pair.group, q)?, from)?;
    let lambda = def[to].clone();
    if lambda.is_zero() || def.iter().enumerate().any(|(j, x)| j != to && !x.is_zero()) {
        return Err(Error::Assertion(format!("deflation of e_(L,φ) on {} is not a multiple of e_β", pair.group.name())));
    }
    let inf = sh.op_on_idempotent(&BisetOp::inflation(&pair.group, q)?, to)?;
    if !num_traits::One::is_one(&inf[from]) {
        return Err(Error::Assertion(format!("e_(L,φ) · Inf(e_β) ≠ e_(L,φ) on {}", pair.group.name())));
    }
    Ok(lambda)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftedMcReport {
    pub is_mc: bool,
    /// Subgroup-class representatives `X ≤ L×K` meeting the criterion.
    pub witnesses: Vec<usize>,
}

/// `L` is an MC-group of `ℚB_K` iff some `X ≤ L×K` has `p₁(X) = L`,
/// `k₁(X) ∩ N ≠ 1` for every nontrivial normal `N` of `L`, and `(X, p₂)` a
/// B_K-group.
pub fn is_mc_group_shifted(k: &GroupRef, l: &GroupRef) -> Result<ShiftedMcReport> {
    let lk = direct_product(l, k)?.group;
    let (ll, xl) = (l.lattice(), lk.lattice());
    let normals: Vec<usize> = ll.minimal_normal_subgroups();
    let mut witnesses = Vec::new();
    for c in xl.classes() {
        let x = xl.subgroup(c.rep).bits();
        let gd = subgroup_to_pair(l, k, x)?;
        if gd.p1 != ll.full() {
            continue;
        }
        if normals.iter().any(|&n| ll.intersect(gd.k1, n) == 0) {
            continue;
        }
        if is_bk_group(&subgroup_over_k(l, k, x)?).is_bk {
            witnesses.push(c.rep);
        }
    }
    Ok(ShiftedMcReport { is_mc: !witnesses.is_empty(), witnesses })
}

/// `ρ(L, e^{L×K}_X) = β_K(X, p₂)` for the subgroup class `class` of `L×K`.
pub fn rho(k: &GroupRef, l: &GroupRef, class: usize) -> Result<GroupOverK> {
    let lk = direct_product(l, k)?.group;
    let xl = lk.lattice();
    beta_k(&subgroup_over_k(l, k, xl.subgroup(xl.class_rep(class)).bits())?)
}
