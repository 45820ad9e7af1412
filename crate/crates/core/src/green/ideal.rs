//! Composition in the category of the functor, principal ideals generated by
//! idempotents, and the domination relation.

use num_traits::Zero;

use super::{GreenFunctor, IdempotentRef};
use crate::error::{Error, Result};
use crate::grp::{catalog_up_to, direct_product, subgroup_group, Group, GroupHom, GroupRef};
use crate::linalg::RowSpace;
use crate::ops::{BisetOp, OpKind};
use crate::rational::Q;

fn projection(source: &GroupRef, target: &GroupRef, f: impl Fn(usize) -> usize) -> Result<BisetOp> {
    let images = (0..source.order()).map(|x| f(x) as u32).collect();
    BisetOp::new(OpKind::Inf, GroupHom::new_unchecked(source.clone(), target.clone(), images))
}

/// `α ∘ β = Def^{H×K×G}_{H×G}(Inf^{H×K×G}_{H×K}(α) · Inf^{H×K×G}_{K×G}(β))`
/// for `α ∈ A(H×K)`, `β ∈ A(K×G)`, all in the distinguished basis.
pub fn compose(inst: &dyn GreenFunctor, h: &GroupRef, k: &GroupRef, g: &GroupRef, alpha: &[Q], beta: &[Q]) -> Result<Vec<Q>> {
    let hk = direct_product(h, k)?.group;
    let kg = direct_product(k, g)?.group;
    let hg = direct_product(h, g)?.group;
    let t = direct_product(&hk, g)?.group;
    inst.admit(&t)?;
    let (nk, ng) = (k.order(), g.order());
    let inf_hk = projection(&t, &hk, |x| x / ng)?;
    let inf_kg = projection(&t, &kg, |x| ((x / ng) % nk) * ng + x % ng)?;
    let to_hg = projection(&t, &hg, |x| (x / ng / nk) * ng + x % ng)?;
    let def = BisetOp::new(OpKind::Def, to_hg.hom().clone())?;
    let a = inst.op_in_idem(&inf_hk, &inst.to_idem(&hk, alpha))?;
    let b = inst.op_in_idem(&inf_kg, &inst.to_idem(&kg, beta))?;
    let prod: Vec<Q> = a.iter().zip(&b).map(|(x, y)| if x.is_zero() || y.is_zero() { Q::zero() } else { x * y }).collect();
    let x = inst.from_idem(&t, &prod);
    inst.apply(&def, &x)
}

/// The identity of `G` in the category: `Ind^{G×G}_{Δ(G)} Inf^{Δ(G)}_1` of the unit of `A(1)`.
pub fn identity_morphism(inst: &dyn GreenFunctor, g: &GroupRef) -> Result<Vec<Q>> {
    let gg = direct_product(g, g)?.group;
    let n = g.order();
    let diag = crate::bits::Bits::from_iter(gg.order(), (0..n).map(|x| x * n + x));
    let (d, incl) = subgroup_group(&gg, &diag)?;
    let one = Group::trivial();
    let inf = BisetOp::new(OpKind::Inf, GroupHom::trivial(&d, &one))?;
    let ind = BisetOp::new(OpKind::Ind, incl)?;
    let x = inst.apply(&inf, &inst.unit(&one))?;
    inst.apply(&ind, &x)
}

/// Coordinates on `G×1` read as coordinates on `G`; the two tables agree.
fn identify(from: &GroupRef, to: &GroupRef) -> Result<()> {
    if from.table() != to.table() {
        return Err(Error::Assertion(format!("{} and {} differ", from.name(), to.name())));
    }
    Ok(())
}

/// Evaluation at `G` of the ideal generated by one idempotent.
#[derive(Debug, Clone)]
pub struct PrincipalIdeal {
    /// Reduced row-echelon basis in idempotent coordinates of `A(G)`.
    pub space: RowSpace,
    /// The idempotents spanning it.
    pub support: Vec<usize>,
}

/// `{b ∘ e : b ∈ A(G×H)}` for the generator `e ∈ A(H) = A(H×1)`, as the span
/// of the images of the idempotent basis of `A(G×H)` under composition.
pub fn principal_ideal_eval(inst: &dyn GreenFunctor, gen: &IdempotentRef, g: &GroupRef) -> Result<PrincipalIdeal> {
    let k = &gen.group;
    let one = Group::trivial();
    let k1 = direct_product(k, &one)?.group;
    identify(&k1, k)?;
    let g1 = direct_product(g, &one)?.group;
    identify(&g1, g)?;
    let dp = direct_product(g, k)?;
    let gk = dp.group.clone();
    inst.admit(&gk)?;
    let beta = inst.idempotent(k, gen.index);
    let n = inst.dim(g);
    let mut space = RowSpace::new(n);
    // e_x ∘ β vanishes unless e_x meets Inf^{G×K}_K(β)
    let inflated = inst.op_on_idempotent(&BisetOp::new(OpKind::Inf, dp.proj2)?, gen.index)?;
    for i in (0..inst.dim(&gk)).filter(|&i| !inflated[i].is_zero()) {
        let b = inst.idempotent(&gk, i);
        let r = compose(inst, g, k, &one, &b, &beta)?;
        space.insert(inst.to_idem(g, &r));
        if space.rank() == n {
            break;
        }
    }
    let mut support = Vec::new();
    for (row, &p) in space.rows().iter().zip(space.pivots()) {
        if row.iter().enumerate().any(|(j, x)| j != p && !x.is_zero()) {
            return Err(Error::Assertion(format!("ideal at {} is not spanned by idempotents", g.name())));
        }
        support.push(p);
    }
    Ok(PrincipalIdeal { space, support })
}

/// Idempotents `e_G` with `(G, e_G) ≫ gen`: some `e' ∈ E_{G×H}` has
/// coefficient 1 in `Inf^{G×H}_H(gen)` and `e_G · Def^{G×H}_G(e') ≠ 0`.
pub fn ideal_support(inst: &dyn GreenFunctor, gen: &IdempotentRef, g: &GroupRef) -> Result<Vec<usize>> {
    let dp = direct_product(g, &gen.group)?;
    inst.admit(&dp.group)?;
    let inf = BisetOp::new(OpKind::Inf, dp.proj2)?;
    let def = BisetOp::new(OpKind::Def, dp.proj1)?;
    let mut hit = vec![false; inst.dim(g)];
    for (x, c) in inst.op_on_idempotent(&inf, gen.index)?.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (j, d) in inst.op_on_idempotent(&def, x)?.iter().enumerate() {
            if !d.is_zero() {
                hit[j] = true;
            }
        }
    }
    Ok((0..hit.len()).filter(|&j| hit[j]).collect())
}

/// `(H, e_H) ≫ (K, e_K)` by the idempotent criterion on `E_{H×K}`.
pub fn dominates(inst: &dyn GreenFunctor, a: &IdempotentRef, b: &IdempotentRef) -> Result<bool> {
    let dp = direct_product(&a.group, &b.group)?;
    inst.admit(&dp.group)?;
    let inf = BisetOp::new(OpKind::Inf, dp.proj2)?;
    let def = BisetOp::new(OpKind::Def, dp.proj1)?;
    for (x, c) in inst.op_on_idempotent(&inf, b.index)?.iter().enumerate() {
        if !c.is_zero() && !inst.op_on_idempotent(&def, x)?[a.index].is_zero() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `(H, e_H) ≫ (K, e_K)` as membership of `e_H` in the ideal generated by `e_K`.
pub fn dominates_via_ideal(inst: &dyn GreenFunctor, a: &IdempotentRef, b: &IdempotentRef) -> Result<bool> {
    let ideal = principal_ideal_eval(inst, b, &a.group)?;
    let mut v = vec![Q::zero(); inst.dim(&a.group)];
    v[a.index] = num_traits::One::one();
    Ok(ideal.space.contains(&v))
}

/// Catalog groups of least order where the ideal generated by `gens` is
/// nonzero. Each is checked to be an MC-group.
pub fn minimal_groups_of_ideal(inst: &dyn GreenFunctor, gens: &[IdempotentRef], max_order: usize) -> Result<Vec<GroupRef>> {
    if gens.is_empty() {
        return Ok(vec![]);
    }
    let groups = catalog_up_to(max_order);
    let mut found: Vec<GroupRef> = Vec::new();
    for g in &groups {
        if found.first().is_some_and(|f| f.order() < g.order()) {
            break;
        }
        let mut nonzero = false;
        for gen in gens {
            if !ideal_support(inst, gen, g)?.is_empty() {
                nonzero = true;
                break;
            }
        }
        if nonzero {
            if !super::is_mc_group(inst, g)?.is_mc {
                return Err(Error::Assertion(format!("{} is minimal for the ideal but not an MC-group", g.name())));
            }
            found.push(g.clone());
        }
    }
    Ok(found)
}
