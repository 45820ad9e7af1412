//! The rational Burnside algebra ℚB(G) on the basis `[G/K]`, `K` running
//! over subgroup classes.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use serde_json::Value;

use crate::error::{validation, Error, Result};
use crate::grp::GroupRef;
use crate::labels::{class_labels, display_name};
use crate::memo::GroupMemo;
use crate::ops::{BisetOp, OpKind};
use crate::rational::{format_combination, format_q, parse_q, q, Q};

#[derive(Debug, Clone, PartialEq)]
pub struct BurnsideElt {
    group: GroupRef,
    coeffs: Vec<Q>,
}

impl BurnsideElt {
    pub fn zero(g: &GroupRef) -> BurnsideElt {
        BurnsideElt { group: g.clone(), coeffs: vec![Q::zero(); g.lattice().classes().len()] }
    }

    /// `[G/K]` for the subgroup class `class`.
    pub fn basis_element(g: &GroupRef, class: usize) -> BurnsideElt {
        let mut e = BurnsideElt::zero(g);
        e.coeffs[class] = Q::one();
        e
    }

    /// The unit `[G/G]`.
    pub fn one(g: &GroupRef) -> BurnsideElt {
        let last = g.lattice().classes().len() - 1;
        BurnsideElt::basis_element(g, last)
    }

    pub fn from_coeffs(g: &GroupRef, coeffs: Vec<Q>) -> Result<BurnsideElt> {
        let n = g.lattice().classes().len();
        if coeffs.len() != n {
            return validation(format!("{} has {n} subgroup classes, got {} coefficients", g.name(), coeffs.len()));
        }
        Ok(BurnsideElt { group: g.clone(), coeffs })
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Q> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn same_group(&self, other: &BurnsideElt) -> Result<()> {
        if *self.group != *other.group {
            return validation(format!("elements of B({}) and B({}) cannot be combined", self.group.name(), other.group.name()));
        }
        Ok(())
    }

    pub fn add(&self, other: &BurnsideElt) -> Result<BurnsideElt> {
        self.same_group(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(BurnsideElt { group: self.group.clone(), coeffs })
    }

    pub fn sub(&self, other: &BurnsideElt) -> Result<BurnsideElt> {
        self.same_group(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(BurnsideElt { group: self.group.clone(), coeffs })
    }

    pub fn scale(&self, c: &Q) -> BurnsideElt {
        BurnsideElt { group: self.group.clone(), coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// `{class-label: "p/q"}` over the nonzero coefficients.
    pub fn to_json(&self) -> Value {
        let labels = class_labels(&self.group);
        let map: BTreeMap<String, String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (labels[i].clone(), format_q(c)))
            .collect();
        serde_json::to_value(map).expect("string map serializes")
    }

    pub fn from_json(g: &GroupRef, v: &Value) -> Result<BurnsideElt> {
        let labels = class_labels(g);
        let obj = v.as_object().ok_or_else(|| Error::Validation("expected a JSON object".into()))?;
        let mut e = BurnsideElt::zero(g);
        for (k, val) in obj {
            let i = labels
                .iter()
                .position(|l| l == k)
                .ok_or_else(|| Error::Validation(format!("{k:?} is not a subgroup class of {}", g.name())))?;
            let s = val.as_str().ok_or_else(|| Error::Validation(format!("coefficient of {k:?} is not a string")))?;
            e.coeffs[i] = parse_q(s)?;
        }
        Ok(e)
    }
}

impl std::fmt::Display for BurnsideElt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let g = display_name(&self.group);
        // largest subgroups first
        let labels: Vec<String> = class_labels(&self.group).iter().rev().map(|l| format!("[{g}/{l}]")).collect();
        let coeffs: Vec<Q> = self.coeffs.iter().rev().cloned().collect();
        f.write_str(&format_combination(&coeffs, &labels))
    }
}

/// Values of the mark homomorphism, one per subgroup class.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkVector {
    group: GroupRef,
    values: Vec<Q>,
}

impl MarkVector {
    pub fn new(g: &GroupRef, values: Vec<Q>) -> Result<MarkVector> {
        let n = g.lattice().classes().len();
        if values.len() != n {
            return validation(format!("{} has {n} subgroup classes, got {} marks", g.name(), values.len()));
        }
        Ok(MarkVector { group: g.clone(), values })
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }
}

/// Table of marks: `get(l, k)` is the number of fixed points of the class
/// `l` subgroup on `G/K` for the class `k`. Upper triangular in class order.
#[derive(Debug)]
pub struct MarkTable {
    rows: Vec<Vec<i64>>,
}

impl MarkTable {
    pub(crate) fn from_rows(rows: Vec<Vec<i64>>) -> MarkTable {
        MarkTable { rows }
    }

    pub fn get(&self, l: usize, k: usize) -> i64 {
        self.rows[l][k]
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        let support: Vec<usize> = (0..x.len()).filter(|&k| !x[k].is_zero()).collect();
        self.rows
            .iter()
            .map(|row| {
                let mut s = Q::zero();
                for &k in &support {
                    if row[k] != 0 {
                        s += &x[k] * q(row[k]);
                    }
                }
                s
            })
            .collect()
    }

    /// Inverse of `apply`, by back substitution.
    pub fn solve(&self, v: &[Q]) -> Vec<Q> {
        let n = self.rows.len();
        let mut x = vec![Q::zero(); n];
        for l in (0..n).rev() {
            let mut s = v[l].clone();
            for k in l + 1..n {
                let m = self.rows[l][k];
                if m != 0 && !x[k].is_zero() {
                    s -= &x[k] * q(m);
                }
            }
            x[l] = s / q(self.rows[l][l]);
        }
        x
    }
}

static MARKS: Lazy<GroupMemo<MarkTable>> = Lazy::new(GroupMemo::default);

pub fn mark_table(g: &GroupRef) -> Arc<MarkTable> {
    MARKS.get_or_init(g, || {
        let lat = g.lattice();
        let classes = lat.classes();
        let c = classes.len();
        let mut rows = vec![vec![0i64; c]; c];
        for (k, ck) in classes.iter().enumerate() {
            let kk = lat.subgroup(ck.rep).order();
            let factor = (lat.normalizer_order(ck.rep) / kk) as i64;
            for (l, cl) in classes.iter().enumerate().take(k + 1) {
                let ll = lat.subgroup(cl.rep).order();
                if !kk.is_multiple_of(ll) {
                    continue;
                }
                let hits = ck.members.iter().filter(|&&m| lat.is_below(cl.rep, m)).count() as i64;
                rows[l][k] = factor * hits;
            }
        }
        MarkTable { rows }
    })
}

/// Subgroup-class labels in basis order.
pub fn basis(g: &GroupRef) -> Vec<String> {
    class_labels(g).to_vec()
}

/// `[G/H]·[G/K] = Σ_{x ∈ H\G/K} [G/(H ∩ xKx⁻¹)]`, as (class, multiplicity).
pub fn basis_product(g: &GroupRef, i: usize, j: usize) -> Vec<(usize, u64)> {
    let lat = g.lattice();
    let h = lat.class_rep(i);
    let k = lat.class_rep(j);
    let mut out: BTreeMap<usize, u64> = BTreeMap::new();
    for x in g.double_cosets(lat.subgroup(h).bits(), lat.subgroup(k).bits()) {
        let meet = lat.intersect(h, lat.conjugate(x, k));
        *out.entry(lat.class_of(meet)).or_default() += 1;
    }
    out.into_iter().collect()
}

pub fn mult(a: &BurnsideElt, b: &BurnsideElt) -> Result<BurnsideElt> {
    a.same_group(b)?;
    let g = &a.group;
    let mut out = BurnsideElt::zero(g);
    for (i, x) in a.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.coeffs.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
            let xy = x * y;
            for (c, m) in basis_product(g, i, j) {
                out.coeffs[c] += &xy * q(m as i64);
            }
        }
    }
    Ok(out)
}

pub fn marks(a: &BurnsideElt) -> MarkVector {
    MarkVector { group: a.group.clone(), values: mark_table(&a.group).apply(&a.coeffs) }
}

pub fn from_marks(v: &MarkVector) -> BurnsideElt {
    BurnsideElt { group: v.group.clone(), coeffs: mark_table(&v.group).solve(&v.values) }
}

/// `e^G_H = (1/|N_G(H)|) Σ_{K ≤ H} |K| μ(K,H) [G/K]` for the subgroup class `class`.
pub fn idempotent(g: &GroupRef, class: usize) -> BurnsideElt {
    let lat = g.lattice();
    let h = lat.class_rep(class);
    let mut e = BurnsideElt::zero(g);
    for (k, mu) in lat.moebius().column(h) {
        if mu != 0 {
            e.coeffs[lat.class_of(k)] += q(lat.subgroup(k).order() as i64 * mu);
        }
    }
    let n = q(lat.normalizer_order(h) as i64);
    for c in e.coeffs.iter_mut() {
        if !c.is_zero() {
            *c /= &n;
        }
    }
    e
}

pub fn idempotents(g: &GroupRef) -> Vec<BurnsideElt> {
    (0..g.lattice().classes().len()).map(|c| idempotent(g, c)).collect()
}

/// Column of an elementary operation: the image of the basis element `class`
/// as (target class, multiplicity).
pub fn op_column(op: &BisetOp, class: usize) -> Vec<(usize, u64)> {
    let hom = op.hom();
    let src = op.source();
    let tgt = op.target();
    let slat = src.lattice();
    let tlat = tgt.lattice();
    let k = slat.class_rep(class);
    let kbits = slat.subgroup(k).bits();
    let single = |bits: crate::bits::Bits| vec![(tlat.class_of(tlat.index_of(&bits).expect("image is a subgroup")), 1)];
    match op.kind() {
        OpKind::Ind | OpKind::Def | OpKind::Iso => single(hom.image_set(kbits)),
        OpKind::Inf => single(hom.preimage_set(kbits)),
        OpKind::Res => {
            let image = hom.image_set(&crate::bits::Bits::from_iter(tgt.order(), 0..tgt.order()));
            let mut out: BTreeMap<usize, u64> = BTreeMap::new();
            for x in src.double_cosets(&image, kbits) {
                let conj = slat.subgroup(slat.conjugate(x, k)).bits().intersection(&image);
                let pre = hom.preimage_set(&conj);
                let c = tlat.class_of(tlat.index_of(&pre).expect("preimage is a subgroup"));
                *out.entry(c).or_default() += 1;
            }
            out.into_iter().collect()
        }
    }
}

pub fn elementary_op(op: &BisetOp, a: &BurnsideElt) -> Result<BurnsideElt> {
    if *a.group != **op.source() {
        return validation(format!("{op} cannot act on B({})", a.group.name()));
    }
    let mut out = BurnsideElt::zero(op.target());
    for (i, x) in a.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (c, m) in op_column(op, i) {
            out.coeffs[c] += x * q(m as i64);
        }
    }
    Ok(out)
}

/// `m_{G,N} = (1/|G|) Σ_{XN = G} |X| μ(X,G)` for the normal subgroup at `n`.
pub fn m_constant(g: &GroupRef, n: usize) -> Result<Q> {
    let lat = g.lattice();
    if n >= lat.len() || !lat.is_normal(n) {
        return validation(format!("subgroup {n} is not normal in {}", g.name()));
    }
    let order = g.order();
    let nn = lat.subgroup(n).order();
    let mut s = 0i64;
    for (x, mu) in lat.moebius().column(lat.full()) {
        if mu == 0 {
            continue;
        }
        let xx = lat.subgroup(x).order();
        let meet = lat.subgroup(lat.intersect(x, n)).order();
        if xx * nn / meet == order {
            s += xx as i64 * mu;
        }
    }
    Ok(Q::new(s.into(), (order as i64).into()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BGroupReport {
    pub is_b_group: bool,
    /// Nontrivial normal subgroups with `m_{G,N} ≠ 0`, with the constant.
    pub witnesses: Vec<(usize, Q)>,
}

pub fn is_b_group(g: &GroupRef) -> BGroupReport {
    let lat = g.lattice();
    let witnesses: Vec<(usize, Q)> = lat
        .normal_subgroups()
        .into_iter()
        .filter(|&n| n != 0)
        .filter_map(|n| {
            let m = m_constant(g, n).expect("normal subgroup");
            (!m.is_zero()).then_some((n, m))
        })
        .collect();
    BGroupReport { is_b_group: witnesses.is_empty(), witnesses }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::{catalog_up_to, parse_group_spec};
    use crate::rational::qf;

    fn g(s: &str) -> GroupRef {
        parse_group_spec(s).unwrap()
    }

    fn class_of_order(g: &GroupRef, n: usize) -> usize {
        let lat = g.lattice();
        lat.classes().iter().position(|c| lat.subgroup(c.rep).order() == n).unwrap()
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(basis(&g("1")).len(), 1);
        assert_eq!(basis(&g("C2")).len(), 2);
        assert_eq!(basis(&g("S3")).len(), 4);
    }

    #[test]
    fn products() {
        let c2 = g("C2");
        let free = BurnsideElt::basis_element(&c2, 0);
        assert_eq!(mult(&free, &free).unwrap(), free.scale(&q(2)));
        let s3 = g("S3");
        let t = BurnsideElt::basis_element(&s3, class_of_order(&s3, 2));
        let expect = t.add(&BurnsideElt::basis_element(&s3, 0)).unwrap();
        assert_eq!(mult(&t, &t).unwrap(), expect);
        assert_eq!(mult(&BurnsideElt::one(&s3), &t).unwrap(), t);
    }

    #[test]
    fn marks_examples() {
        let c2 = g("C2");
        assert_eq!(marks(&BurnsideElt::one(&c2)).values(), &[q(1), q(1)]);
        assert_eq!(marks(&BurnsideElt::basis_element(&c2, 0)).values(), &[q(2), q(0)]);
    }

    #[test]
    fn idempotent_examples() {
        let c2 = g("C2");
        let e = idempotent(&c2, 1);
        assert_eq!(e.coeffs(), &[qf(-1, 2), q(1)]);
        assert_eq!(e.to_string(), "[C2/C2] - 1/2 [C2/1]");
        let s3 = g("S3");
        assert_eq!(idempotent(&s3, 0), BurnsideElt::basis_element(&s3, 0).scale(&qf(1, 6)));
        let c3 = class_of_order(&s3, 3);
        let m = marks(&idempotent(&s3, c3));
        for (i, v) in m.values().iter().enumerate() {
            assert_eq!(*v, if i == c3 { q(1) } else { q(0) });
        }
    }

    #[test]
    fn op_examples() {
        let c2 = g("C2");
        let one = g("1");
        let res = BisetOp::restriction(&c2, 0).unwrap();
        assert_eq!(elementary_op(&res, &BurnsideElt::one(&c2)).unwrap(), BurnsideElt::one(&one));
        let ind = BisetOp::induction(&c2, 0).unwrap();
        assert_eq!(elementary_op(&ind, &BurnsideElt::one(&one)).unwrap(), BurnsideElt::basis_element(&c2, 0));
        let def = BisetOp::deflation(&c2, 1).unwrap();
        assert_eq!(elementary_op(&def, &BurnsideElt::basis_element(&c2, 0)).unwrap(), BurnsideElt::one(&one));
        assert!(elementary_op(&def, &BurnsideElt::one(&one)).is_err());
    }

    #[test]
    fn m_examples() {
        let c2 = g("C2");
        assert_eq!(m_constant(&c2, 1).unwrap(), qf(1, 2));
        assert_eq!(m_constant(&c2, 0).unwrap(), q(1));
        let v4 = g("V4");
        assert_eq!(m_constant(&v4, 1).unwrap(), q(0));
        let s3 = g("S3");
        let c2_in_s3 = s3.lattice().class_rep(class_of_order(&s3, 2));
        assert!(m_constant(&s3, c2_in_s3).is_err());
    }

    #[test]
    fn b_group_examples() {
        assert!(is_b_group(&g("1")).is_b_group);
        let r = is_b_group(&g("C2"));
        assert!(!r.is_b_group);
        assert_eq!(r.witnesses, vec![(1, qf(1, 2))]);
        assert!(is_b_group(&g("V4")).is_b_group);
    }

    #[test]
    fn idempotents_orthogonal_and_complete() {
        for gr in catalog_up_to(12) {
            let es = idempotents(&gr);
            let mut sum = BurnsideElt::zero(&gr);
            for (i, a) in es.iter().enumerate() {
                sum = sum.add(a).unwrap();
                for (j, b) in es.iter().enumerate() {
                    let p = mult(a, b).unwrap();
                    if i == j {
                        assert_eq!(&p, a, "{}", gr.name());
                    } else {
                        assert!(p.is_zero(), "{}", gr.name());
                    }
                }
            }
            assert_eq!(sum, BurnsideElt::one(&gr));
        }
    }

    #[test]
    fn json_round_trip() {
        let s3 = g("S3");
        let e = idempotent(&s3, 2);
        let v = e.to_json();
        assert_eq!(BurnsideElt::from_json(&s3, &v).unwrap(), e);
        assert!(BurnsideElt::from_json(&s3, &serde_json::json!({"Q8": "1/1"})).is_err());
    }
}
