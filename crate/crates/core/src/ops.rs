//! The five elementary biset operations, each carried by a group homomorphism.

use std::fmt;

use serde::Serialize;

use crate::error::{validation, Result};
use crate::grp::{are_isomorphic, quotient, subgroup_group, GroupHom, GroupRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OpKind {
    Res,
    Ind,
    Inf,
    Def,
    Iso,
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OpKind::Res => "Res",
            OpKind::Ind => "Ind",
            OpKind::Inf => "Inf",
            OpKind::Def => "Def",
            OpKind::Iso => "Iso",
        };
        f.write_str(s)
    }
}

/// An elementary operation `A(source) → A(target)`.
///
/// * `Res(ι)`, `Ind(ι)` for an injective `ι: H → G`; Res goes `G → H`, Ind `H → G`.
/// * `Inf(π)`, `Def(π)` for a surjective `π: G → Q`; Inf goes `Q → G`, Def `G → Q`.
/// * `Iso(φ)` for a bijective `φ: G → G'`.
#[derive(Debug, Clone)]
pub struct BisetOp {
    kind: OpKind,
    hom: GroupHom,
}

impl BisetOp {
    pub fn new(kind: OpKind, hom: GroupHom) -> Result<BisetOp> {
        let ok = match kind {
            OpKind::Res | OpKind::Ind => hom.is_injective(),
            OpKind::Inf | OpKind::Def => hom.is_surjective(),
            OpKind::Iso => hom.is_bijective(),
        };
        if !ok {
            let need = match kind {
                OpKind::Res | OpKind::Ind => "injective",
                OpKind::Inf | OpKind::Def => "surjective",
                OpKind::Iso => "bijective",
            };
            return validation(format!("{kind} needs a {need} homomorphism"));
        }
        Ok(BisetOp { kind, hom })
    }

    /// `Res^G_H` for the subgroup at `h` in the lattice of `g`.
    pub fn restriction(g: &GroupRef, h: usize) -> Result<BisetOp> {
        let (_, incl) = subgroup_group(g, g.lattice().subgroup(h).bits())?;
        BisetOp::new(OpKind::Res, incl)
    }

    /// `Ind^G_H` for the subgroup at `h`.
    pub fn induction(g: &GroupRef, h: usize) -> Result<BisetOp> {
        let (_, incl) = subgroup_group(g, g.lattice().subgroup(h).bits())?;
        BisetOp::new(OpKind::Ind, incl)
    }

    /// `Inf^G_{G/N}` for the normal subgroup at `n`.
    pub fn inflation(g: &GroupRef, n: usize) -> Result<BisetOp> {
        let (_, pi) = quotient(g, g.lattice().subgroup(n).bits())?;
        BisetOp::new(OpKind::Inf, pi)
    }

    /// `Def^G_{G/N}` for the normal subgroup at `n`.
    pub fn deflation(g: &GroupRef, n: usize) -> Result<BisetOp> {
        let (_, pi) = quotient(g, g.lattice().subgroup(n).bits())?;
        BisetOp::new(OpKind::Def, pi)
    }

    pub fn iso(phi: GroupHom) -> Result<BisetOp> {
        BisetOp::new(OpKind::Iso, phi)
    }

    pub fn kind(&self) -> OpKind {
        self.kind
    }

    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    /// Group whose evaluation the operation reads.
    pub fn source(&self) -> &GroupRef {
        match self.kind {
            OpKind::Res | OpKind::Inf => self.hom.target(),
            OpKind::Ind | OpKind::Def | OpKind::Iso => self.hom.source(),
        }
    }

    /// Group whose evaluation the operation writes.
    pub fn target(&self) -> &GroupRef {
        match self.kind {
            OpKind::Res | OpKind::Inf => self.hom.source(),
            OpKind::Ind | OpKind::Def | OpKind::Iso => self.hom.target(),
        }
    }

    /// `self × id_K`, acting between evaluations at products with `K`.
    pub fn times(&self, k: &GroupRef) -> Result<BisetOp> {
        let a = crate::grp::direct_product(self.hom.source(), k)?;
        let b = crate::grp::direct_product(self.hom.target(), k)?;
        let nk = k.order();
        let images = (0..a.group.order())
            .map(|x| (self.hom.apply(x / nk) * nk + x % nk) as u32)
            .collect();
        BisetOp::new(self.kind, GroupHom::new(a.group, b.group, images)?)
    }
}

impl fmt::Display for BisetOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({} -> {})", self.kind, self.source().name(), self.target().name())
    }
}

/// Restriction and induction along every subgroup class, inflation and
/// deflation along every normal subgroup, and a few automorphisms of `G`.
pub fn elementary_ops(gr: &GroupRef) -> Vec<BisetOp> {
    let lat = gr.lattice();
    let mut ops = Vec::new();
    for c in lat.classes() {
        ops.push(BisetOp::restriction(gr, c.rep).expect("valid operation"));
        ops.push(BisetOp::induction(gr, c.rep).expect("valid operation"));
    }
    for n in lat.normal_subgroups() {
        ops.push(BisetOp::inflation(gr, n).expect("valid operation"));
        ops.push(BisetOp::deflation(gr, n).expect("valid operation"));
    }
    for &t in gr.generators() {
        let conj = (0..gr.order()).map(|x| gr.conj(t as usize, x) as u32).collect();
        ops.push(BisetOp::iso(GroupHom::new(gr.clone(), gr.clone(), conj).expect("automorphism")).expect("bijective"));
    }
    if gr.is_abelian() {
        let inv = (0..gr.order()).map(|x| gr.inv(x) as u32).collect();
        ops.push(BisetOp::iso(GroupHom::new(gr.clone(), gr.clone(), inv).expect("automorphism")).expect("bijective"));
    }
    if let Some(f) = are_isomorphic(gr, gr) {
        ops.push(BisetOp::iso(f).expect("valid operation"));
    }
    ops
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::parse_group_spec;

    #[test]
    fn directions() {
        let s3 = parse_group_spec("S3").unwrap();
        let lat = s3.lattice();
        let c3 = (0..lat.len()).find(|&h| lat.subgroup(h).order() == 3).unwrap();
        let res = BisetOp::restriction(&s3, c3).unwrap();
        assert_eq!(res.source().order(), 6);
        assert_eq!(res.target().order(), 3);
        let def = BisetOp::deflation(&s3, c3).unwrap();
        assert_eq!(def.target().order(), 2);
        let inf = BisetOp::inflation(&s3, c3).unwrap();
        assert_eq!(inf.source().order(), 2);
        assert_eq!(inf.target().order(), 6);
    }

    #[test]
    fn rejects_wrong_homs() {
        let c2 = parse_group_spec("C2").unwrap();
        let one = parse_group_spec("1").unwrap();
        let collapse = GroupHom::trivial(&c2, &one);
        assert!(BisetOp::new(OpKind::Res, collapse.clone()).is_err());
        assert!(BisetOp::new(OpKind::Def, collapse.clone()).is_ok());
        assert!(BisetOp::new(OpKind::Iso, collapse).is_err());
        let s3 = parse_group_spec("S3").unwrap();
        let c2_in_s3 = (0..s3.lattice().len()).find(|&h| s3.lattice().subgroup(h).order() == 2).unwrap();
        assert!(BisetOp::deflation(&s3, c2_in_s3).is_err());
    }

    #[test]
    fn product_with_k() {
        let c2 = parse_group_spec("C2").unwrap();
        let k = parse_group_spec("C3").unwrap();
        let def = BisetOp::deflation(&c2, 1).unwrap().times(&k).unwrap();
        assert_eq!(def.source().order(), 6);
        assert_eq!(def.target().order(), 3);
    }
}
