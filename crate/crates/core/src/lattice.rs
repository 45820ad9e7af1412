//! The poset of MC-pairs up to mutual domination, its closed subsets and the
//! correspondence with idempotent-generated ideals, all truncated to catalog
//! groups of bounded order.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{validation, Error, Result};
use crate::green::{ideal_support, is_mc_group, transport, GreenFunctor, IdempotentRef};
use crate::grp::{are_isomorphic, catalog_up_to, caps, check_cap, direct_product, quotient, GroupRef};
use crate::labels::{display_name, structural_name};
use crate::ops::{BisetOp, OpKind};
use crate::qburnside::is_b_group;
use crate::shifted::{self, GroupOverK, Shifted};

/// Default limit on nodes for closed-set enumeration.
pub const CLOSED_SET_LIMIT: usize = 20;

/// Burnside relations are cross-checked against the generic criterion up to
/// this product order.
pub const CROSS_CHECK_PRODUCT: usize = 144;

#[derive(Debug, Clone)]
pub struct MCPoset {
    pub instance: String,
    pub bound: usize,
    /// Canonical representatives, sorted by (order, catalog index, idempotent).
    pub nodes: Vec<IdempotentRef>,
    pub labels: Vec<String>,
    /// `relation[a][b]` iff `a ≫ b`.
    pub relation: Vec<Vec<bool>>,
}

impl MCPoset {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dominates(&self, a: usize, b: usize) -> bool {
        self.relation[a][b]
    }

    /// Cover relations `a ≫ b`, `a ≠ b`, with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.relation[a][b] {
                    continue;
                }
                let between = (0..n).any(|c| c != a && c != b && self.relation[a][c] && self.relation[c][b]);
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "instance": self.instance,
            "bound": self.bound,
            "nodes": self.labels,
            "edges": self.covers().iter().map(|&(a, b)| json!([self.labels[a], self.labels[b]])).collect::<Vec<_>>(),
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = format!("digraph mc_poset {{\n  label=\"{} up to order {}\";\n", self.instance, self.bound);
        for l in &self.labels {
            s += &format!("  \"{l}\";\n");
        }
        for (a, b) in self.covers() {
            s += &format!("  \"{}\" -> \"{}\";\n", self.labels[a], self.labels[b]);
        }
        s + "}\n"
    }

    pub fn to_tsv(&self) -> String {
        let mut s = format!("# {} up to order {}\n", self.instance, self.bound);
        for l in &self.labels {
            s += &format!("node\t{l}\n");
        }
        for (a, b) in self.covers() {
            s += &format!("edge\t{}\t{}\n", self.labels[a], self.labels[b]);
        }
        s
    }

    fn check_order(&self) -> Result<()> {
        let n = self.len();
        for a in 0..n {
            if !self.relation[a][a] {
                return Err(Error::Assertion(format!("{} does not dominate itself", self.labels[a])));
            }
            for b in 0..n {
                if a != b && self.relation[a][b] && self.relation[b][a] {
                    return Err(Error::Assertion(format!("{} and {} were not collapsed", self.labels[a], self.labels[b])));
                }
                for c in 0..n {
                    if self.relation[a][b] && self.relation[b][c] && !self.relation[a][c] {
                        return Err(Error::Assertion(format!("domination is not transitive at {}", self.labels[b])));
                    }
                }
            }
        }
        Ok(())
    }
}

fn node_label(e: &IdempotentRef) -> String {
    format!("{}:e_{}", display_name(&e.group), e.index)
}

fn check_bound(max_order: usize) -> Result<()> {
    check_cap(format!("order bound {max_order}"), max_order, caps().base)
}

/// MC-pairs `(H, e_H)` with `e_H ∈ E̲_H ∩ E̳_H` over catalog groups up to `max_order`.
pub fn mc_pairs(inst: &dyn GreenFunctor, max_order: usize) -> Result<Vec<IdempotentRef>> {
    check_bound(max_order)?;
    let groups = catalog_up_to(max_order);
    let found: Vec<Vec<IdempotentRef>> = groups
        .par_iter()
        .map(|g| Ok(is_mc_group(inst, g)?.witnesses.into_iter().map(|i| IdempotentRef::new(g, i)).collect()))
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

fn relation_matrix(pairs: &[IdempotentRef], rel: impl Fn(&IdempotentRef, &IdempotentRef) -> Result<bool> + Sync) -> Result<Vec<Vec<bool>>> {
    pairs.par_iter().map(|a| pairs.iter().map(|b| rel(a, b)).collect::<Result<Vec<bool>>>()).collect()
}

/// Collapses mutual domination; the first member of each class (in input
/// order) represents it.
fn collapse(instance: String, bound: usize, pairs: Vec<IdempotentRef>, full: Vec<Vec<bool>>) -> Result<MCPoset> {
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..pairs.len() {
        if !reps.iter().any(|&r| full[r][i] && full[i][r]) {
            reps.push(i);
        }
    }
    let poset = MCPoset {
        instance,
        bound,
        labels: reps.iter().map(|&r| node_label(&pairs[r])).collect(),
        relation: reps.iter().map(|&a| reps.iter().map(|&b| full[a][b]).collect()).collect(),
        nodes: reps.into_iter().map(|r| pairs[r].clone()).collect(),
    };
    poset.check_order()?;
    Ok(poset)
}

fn is_quotient_of(g: &GroupRef, h: &GroupRef) -> Result<bool> {
    if !g.order().is_multiple_of(h.order()) {
        return Ok(false);
    }
    let lat = g.lattice();
    for n in lat.normal_subgroups() {
        if lat.subgroup(n).order() * h.order() == g.order() && are_isomorphic(&quotient(g, lat.subgroup(n).bits())?.0, h).is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `([𝓜], ≫)` on catalog groups up to `max_order`. For the Burnside functor
/// the relation is the quotient relation on B-groups, cross-checked against
/// the generic criterion on small products.
pub fn build_poset(inst: &dyn GreenFunctor, max_order: usize) -> Result<MCPoset> {
    let pairs = mc_pairs(inst, max_order)?;
    let full = if inst.name() == "burnside" {
        let rel = relation_matrix(&pairs, |a, b| is_quotient_of(&a.group, &b.group))?;
        let generic = relation_matrix(&pairs, |a, b| {
            if a.group.order() * b.group.order() > CROSS_CHECK_PRODUCT {
                return Ok(true);
            }
            crate::green::dominates(inst, a, b)
        })?;
        for (i, row) in rel.iter().enumerate() {
            for (j, &r) in row.iter().enumerate() {
                if pairs[i].group.order() * pairs[j].group.order() <= CROSS_CHECK_PRODUCT && generic[i][j] != r {
                    return Err(Error::Assertion(format!(
                        "quotient relation and domination disagree on {} and {}",
                        node_label(&pairs[i]),
                        node_label(&pairs[j])
                    )));
                }
            }
        }
        rel
    } else {
        relation_matrix(&pairs, |a, b| crate::green::dominates(inst, a, b))?
    };
    collapse(inst.name(), max_order, pairs, full)
}

/// An upward-closed set of poset nodes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ClosedSet {
    pub members: Vec<usize>,
}

impl ClosedSet {
    pub fn new(poset: &MCPoset, mut members: Vec<usize>) -> Result<ClosedSet> {
        members.sort_unstable();
        members.dedup();
        if members.iter().any(|&m| m >= poset.len()) {
            return validation("closed set names a node outside the poset");
        }
        for &b in &members {
            for a in 0..poset.len() {
                if poset.relation[a][b] && members.binary_search(&a).is_err() {
                    return validation(format!("set is not closed: {} ≫ {}", poset.labels[a], poset.labels[b]));
                }
            }
        }
        Ok(ClosedSet { members })
    }

    pub fn contains(&self, n: usize) -> bool {
        self.members.binary_search(&n).is_ok()
    }

    pub fn union(&self, other: &ClosedSet) -> ClosedSet {
        let s: BTreeSet<usize> = self.members.iter().chain(&other.members).copied().collect();
        ClosedSet { members: s.into_iter().collect() }
    }

    pub fn intersection(&self, other: &ClosedSet) -> ClosedSet {
        ClosedSet { members: self.members.iter().copied().filter(|&m| other.contains(m)).collect() }
    }

    pub fn labels(&self, poset: &MCPoset) -> Vec<String> {
        self.members.iter().map(|&m| poset.labels[m].clone()).collect()
    }
}

/// All closed subsets, sorted by size then lexicographically.
pub fn closed_sets(poset: &MCPoset, limit: usize) -> Result<Vec<ClosedSet>> {
    if poset.len() > limit {
        return Err(Error::Resource {
            what: format!("closed-set enumeration over {} nodes (lower --max-order or query single ideals)", poset.len()),
            size: poset.len(),
            cap: limit,
        });
    }
    // decide nodes from the top of the order down: a node may join only if
    // everything dominating it already has
    let n = poset.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&a| (std::cmp::Reverse((0..n).filter(|&b| poset.relation[a][b]).count()), a));
    let mut out = Vec::new();
    let mut chosen = vec![false; n];
    fn rec(poset: &MCPoset, order: &[usize], k: usize, chosen: &mut Vec<bool>, out: &mut Vec<ClosedSet>) {
        if k == order.len() {
            out.push(ClosedSet { members: (0..chosen.len()).filter(|&i| chosen[i]).collect() });
            return;
        }
        let b = order[k];
        rec(poset, order, k + 1, chosen, out);
        if (0..chosen.len()).all(|a| a == b || !poset.relation[a][b] || chosen[a]) {
            chosen[b] = true;
            rec(poset, order, k + 1, chosen, out);
            chosen[b] = false;
        }
    }
    rec(poset, &order, 0, &mut chosen, &mut out);
    out.sort_by(|a, b| (a.members.len(), &a.members).cmp(&(b.members.len(), &b.members)));
    out.dedup();
    Ok(out)
}

/// An ideal seen through its evaluations at catalog groups up to `bound`;
/// each evaluation is spanned by the listed idempotents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedIdeal {
    pub instance: String,
    pub bound: usize,
    pub parts: Vec<(GroupRef, Vec<usize>)>,
}

impl TruncatedIdeal {
    pub fn zero(inst: &dyn GreenFunctor, bound: usize) -> TruncatedIdeal {
        TruncatedIdeal { instance: inst.name(), bound, parts: catalog_up_to(bound).into_iter().map(|g| (g, vec![])).collect() }
    }

    pub fn unit(inst: &dyn GreenFunctor, bound: usize) -> TruncatedIdeal {
        let parts = catalog_up_to(bound).into_iter().map(|g| (g.clone(), (0..inst.dim(&g)).collect())).collect();
        TruncatedIdeal { instance: inst.name(), bound, parts }
    }

    /// The ideal generated by the given idempotents, evaluated on the catalog.
    pub fn generated_by(inst: &dyn GreenFunctor, gens: &[IdempotentRef], bound: usize) -> Result<TruncatedIdeal> {
        check_bound(bound)?;
        let parts = catalog_up_to(bound)
            .into_par_iter()
            .map(|g| Ok((g.clone(), generated_at(inst, gens, &g)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncatedIdeal { instance: inst.name(), bound, parts })
    }

    pub fn at(&self, g: &GroupRef) -> Option<&[usize]> {
        self.parts.iter().find(|(h, _)| **h == **g).map(|(_, v)| v.as_slice())
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|(_, v)| v.is_empty())
    }

    pub fn is_contained_in(&self, other: &TruncatedIdeal) -> bool {
        self.parts.iter().zip(&other.parts).all(|((_, a), (_, b))| a.iter().all(|x| b.contains(x)))
    }

    pub fn to_json(&self, inst: &dyn GreenFunctor) -> Value {
        let parts: serde_json::Map<String, Value> = self
            .parts
            .iter()
            .map(|(g, v)| {
                let labels = inst.idempotent_labels(g);
                (display_name(g), json!(v.iter().map(|&i| labels[i].clone()).collect::<Vec<_>>()))
            })
            .collect();
        json!({"bound": self.bound, "evaluations": parts})
    }
}

fn generated_at(inst: &dyn GreenFunctor, gens: &[IdempotentRef], g: &GroupRef) -> Result<Vec<usize>> {
    let mut s = BTreeSet::new();
    for gen in gens {
        s.extend(ideal_support(inst, gen, g)?);
    }
    Ok(s.into_iter().collect())
}

/// Checks closure of a truncated ideal under restriction, induction,
/// inflation and deflation out of each catalog group, and under external
/// products `A(G) × I(H) → I(G×H)` within the bound. Evaluations at
/// non-catalog groups are computed from `gens`.
pub fn check_ideal_property(inst: &dyn GreenFunctor, ideal: &TruncatedIdeal, gens: &[IdempotentRef]) -> Result<()> {
    let fail = |what: String| Err(Error::Assertion(format!("not an ideal: {what}")));
    for (g, part) in &ideal.parts {
        let lat = g.lattice();
        let mut ops = Vec::new();
        for c in lat.classes() {
            ops.push(BisetOp::restriction(g, c.rep)?);
            ops.push(BisetOp::induction(g, c.rep)?);
        }
        for n in lat.normal_subgroups() {
            ops.push(BisetOp::inflation(g, n)?);
            ops.push(BisetOp::deflation(g, n)?);
        }
        for op in ops {
            let src = if **op.source() == **g { part.to_vec() } else { generated_at(inst, gens, op.source())? };
            let tgt = if **op.target() == **g { part.to_vec() } else { generated_at(inst, gens, op.target())? };
            for &i in &src {
                let t = transport(inst, &op, i)?;
                if let Some(j) = (0..t.coeffs.len()).find(|&j| !num_traits::Zero::is_zero(&t.coeffs[j]) && !tgt.contains(&j)) {
                    return fail(format!("{op} sends e_{i} outside the ideal (e_{j})"));
                }
            }
        }
    }
    for (g, _) in &ideal.parts {
        for (h, part) in &ideal.parts {
            if g.order() * h.order() > ideal.bound {
                continue;
            }
            let dp = direct_product(g, h)?;
            let prod = generated_at(inst, gens, &dp.group)?;
            let inf_g = BisetOp::new(OpKind::Inf, dp.proj1.clone())?;
            let inf_h = BisetOp::new(OpKind::Inf, dp.proj2.clone())?;
            for a in 0..inst.dim(g) {
                let x = inst.op_on_idempotent(&inf_g, a)?;
                for &b in part {
                    let y = inst.op_on_idempotent(&inf_h, b)?;
                    if let Some(j) = (0..x.len()).find(|&j| !num_traits::Zero::is_zero(&(&x[j] * &y[j])) && !prod.contains(&j)) {
                        return fail(format!("e_{a} × e_{b} at {}x{} leaves the ideal (e_{j})", g.name(), h.name()));
                    }
                }
            }
        }
    }
    Ok(())
}

/// `Θ(I) = {[H, e_H] : e_H ∈ I(H)}`.
pub fn theta(poset: &MCPoset, ideal: &TruncatedIdeal) -> Result<ClosedSet> {
    if ideal.bound < poset.bound {
        return validation(format!("ideal truncated at {} but the poset reaches {}", ideal.bound, poset.bound));
    }
    let mut members = Vec::new();
    for (n, e) in poset.nodes.iter().enumerate() {
        let part = ideal.at(&e.group).ok_or_else(|| Error::Validation(format!("ideal has no evaluation at {}", e.group.name())))?;
        if part.contains(&e.index) {
            members.push(n);
        }
    }
    ClosedSet::new(poset, members).map_err(|e| Error::Assertion(format!("Θ produced a non-closed set: {e}")))
}

/// `Ψ(B) = Σ_{[H,e_H] ∈ B} ⟨e_H⟩`, evaluated on the catalog up to the poset bound.
pub fn psi(inst: &dyn GreenFunctor, poset: &MCPoset, b: &ClosedSet) -> Result<TruncatedIdeal> {
    ClosedSet::new(poset, b.members.clone())?;
    let gens: Vec<IdempotentRef> = b.members.iter().map(|&m| poset.nodes[m].clone()).collect();
    TruncatedIdeal::generated_by(inst, &gens, poset.bound)
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeReport {
    pub instance: String,
    pub bound: usize,
    pub nodes: usize,
    pub closed_sets: usize,
    pub checks: Vec<Check>,
}

impl LatticeReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Θ∘Ψ and Ψ∘Θ round trips, monotonicity, the ideal property of each Ψ(B)
/// and distributivity of the closed-set lattice.
pub fn verify_lattice_iso(inst: &dyn GreenFunctor, max_order: usize, limit: usize) -> Result<LatticeReport> {
    let poset = build_poset(inst, max_order)?;
    let sets = closed_sets(&poset, limit)?;
    let ideals: Vec<TruncatedIdeal> = sets.iter().map(|b| psi(inst, &poset, b)).collect::<Result<_>>()?;
    let mut checks = Vec::new();
    let mut push = |name: String, passed: bool| checks.push(Check { name, passed });
    for (b, ideal) in sets.iter().zip(&ideals) {
        let tag = format!("{:?}", b.labels(&poset));
        push(format!("theta(psi({tag})) = {tag}"), theta(&poset, ideal).ok().as_ref() == Some(b));
        let gens: Vec<IdempotentRef> = b.members.iter().map(|&m| poset.nodes[m].clone()).collect();
        push(format!("psi({tag}) is an ideal"), check_ideal_property(inst, ideal, &gens).is_ok());
        let back = theta(&poset, ideal).and_then(|t| psi(inst, &poset, &t));
        push(format!("psi(theta(psi({tag}))) = psi({tag})"), back.ok().as_ref() == Some(ideal));
    }
    let mut monotone = true;
    for (i, a) in sets.iter().enumerate() {
        for (j, b) in sets.iter().enumerate() {
            let sub = a.members.iter().all(|&m| b.contains(m));
            if sub != ideals[i].is_contained_in(&ideals[j]) {
                monotone = false;
            }
        }
    }
    push("theta and psi are monotone".into(), monotone);
    let index = |s: &ClosedSet| sets.binary_search_by(|x| (x.members.len(), &x.members).cmp(&(s.members.len(), &s.members))).is_ok();
    let mut lattice_ok = true;
    let mut distributive = true;
    for a in &sets {
        for b in &sets {
            lattice_ok &= index(&a.union(b)) && index(&a.intersection(b));
            for c in &sets {
                distributive &= a.union(&b.intersection(c)) == a.union(b).intersection(&a.union(c));
                distributive &= a.intersection(&b.union(c)) == a.intersection(b).union(&a.intersection(c));
            }
        }
    }
    push("closed sets form a lattice under union and intersection".into(), lattice_ok);
    push("closed-set lattice is distributive".into(), distributive);
    Ok(LatticeReport { instance: inst.name(), bound: max_order, nodes: poset.len(), closed_sets: sets.len(), checks })
}

/// B-groups up to `max_order`, ordered by the quotient relation.
pub fn bgroup_poset(max_order: usize) -> Result<MCPoset> {
    check_bound(max_order)?;
    let pairs: Vec<IdempotentRef> = catalog_up_to(max_order)
        .into_iter()
        .filter(|g| is_b_group(g).is_b_group)
        .map(|g| {
            let top = g.lattice().classes().len() - 1;
            IdempotentRef::new(&g, top)
        })
        .collect();
    let full = relation_matrix(&pairs, |a, b| is_quotient_of(&a.group, &b.group))?;
    collapse("b-groups".into(), max_order, pairs, full)
}

/// B_K-groups `β_K(X, p₂)` for `X ≤ L×K`, `L` in the catalog up to
/// `max_order`, up to isomorphism over `K` and ordered by quotients over `K`.
#[derive(Debug, Clone)]
pub struct BkPoset {
    pub k: GroupRef,
    pub bound: usize,
    pub nodes: Vec<GroupOverK>,
    pub labels: Vec<String>,
    /// `relation[a][b]` iff `b` is a quotient of `a` over `K`.
    pub relation: Vec<Vec<bool>>,
}

fn over_k_label(p: &GroupOverK) -> String {
    let all = crate::bits::Bits::from_iter(p.group.order(), 0..p.group.order());
    format!("{}:im{}:ker{}", structural_name(&p.group), p.phi.image_set(&all).count(), p.phi.kernel().count())
}

impl BkPoset {
    pub fn as_poset(&self) -> MCPoset {
        MCPoset {
            instance: format!("b_k-groups:{}", self.k.name()),
            bound: self.bound,
            nodes: self.nodes.iter().map(|p| IdempotentRef::new(&p.group, 0)).collect(),
            labels: self.labels.clone(),
            relation: self.relation.clone(),
        }
    }
}

pub fn bk_poset(k: &GroupRef, max_order: usize) -> Result<BkPoset> {
    check_bound(max_order)?;
    let mut nodes: Vec<GroupOverK> = Vec::new();
    for l in catalog_up_to(max_order) {
        let lk = direct_product(&l, k)?.group;
        let lat = lk.lattice();
        for c in lat.classes() {
            let pair = shifted::beta_k(&shifted::subgroup_over_k(&l, k, lat.subgroup(c.rep).bits())?)?;
            if !nodes.iter().any(|n| shifted::iso_over_k(n, &pair)) {
                nodes.push(pair);
            }
        }
    }
    nodes.sort_by_key(|p| p.group.order());
    let relation = nodes
        .par_iter()
        .map(|a| nodes.iter().map(|b| shifted::quotient_over_k(a, b)).collect::<Result<Vec<bool>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut labels: Vec<String> = nodes.iter().map(over_k_label).collect();
    for i in 0..labels.len() {
        let dup = labels[..i].iter().filter(|l| **l == labels[i] || l.starts_with(&format!("{}#", labels[i]))).count();
        if dup > 0 {
            labels[i] = format!("{}#{}", labels[i], dup + 1);
        }
    }
    Ok(BkPoset { k: k.clone(), bound: max_order, nodes, labels, relation })
}

/// Checks that `ρ(L, e_X) = β_K(X, p₂)` is an order isomorphism from the
/// MC-poset of `ℚB_K` onto the B_K-group poset.
pub fn check_rho(k: &GroupRef, max_order: usize) -> Result<()> {
    let sh = Shifted::new(k)?;
    let mc = build_poset(&sh, max_order)?;
    let bk = bk_poset(k, max_order)?;
    let mut image = Vec::new();
    for e in &mc.nodes {
        let r = shifted::rho(k, &e.group, e.index)?;
        let j = bk
            .nodes
            .iter()
            .position(|n| shifted::iso_over_k(n, &r))
            .ok_or_else(|| Error::Assertion(format!("ρ({}) is not among the B_K-groups", node_label(e))))?;
        image.push(j);
    }
    let distinct: BTreeSet<usize> = image.iter().copied().collect();
    if distinct.len() != image.len() || image.len() != bk.nodes.len() {
        return Err(Error::Assertion(format!(
            "ρ is not a bijection: {} MC classes onto {} of {} B_K-groups",
            image.len(),
            distinct.len(),
            bk.nodes.len()
        )));
    }
    for a in 0..mc.len() {
        for b in 0..mc.len() {
            if mc.relation[a][b] != bk.relation[image[a]][image[b]] {
                return Err(Error::Assertion(format!("ρ does not preserve order at {} and {}", mc.labels[a], mc.labels[b])));
            }
        }
    }
    Ok(())
}
