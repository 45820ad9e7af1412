//! Explicit finite G-sets, bisets and G-set morphisms. Slow and direct; used
//! to check the closed-form basis formulas of the Burnside and slice algebras.

use crate::bits::Bits;
use crate::error::{validation, Result};
use crate::grp::{direct_product, GroupRef};
use crate::ops::{BisetOp, OpKind};
use crate::qburnside::BurnsideElt;
use crate::rational::q;
use crate::slice::SliceElt;

/// A left action, `action[g·size + x] = g·x`.
#[derive(Debug, Clone)]
pub struct GSet {
    group: GroupRef,
    size: usize,
    action: Vec<u32>,
}

fn check_action(n: usize, size: usize, gens: &[u32], act: impl Fn(usize, usize) -> usize, mul: impl Fn(usize, usize) -> usize) -> bool {
    if (0..size).any(|x| act(0, x) != x) {
        return false;
    }
    // ρ(g s) = ρ(g) ρ(s) on generators determines a homomorphism
    (0..n).all(|g| gens.iter().all(|&s| (0..size).all(|x| act(mul(g, s as usize), x) == act(g, act(s as usize, x)))))
}

impl GSet {
    pub fn new(group: &GroupRef, size: usize, action: Vec<u32>) -> Result<GSet> {
        let n = group.order();
        if action.len() != n * size || action.iter().any(|&y| y as usize >= size) {
            return validation("action table has the wrong shape");
        }
        let ok = check_action(n, size, group.generators(), |g, x| action[g * size + x] as usize, |a, b| group.mul(a, b));
        if !ok {
            return validation(format!("not a left action of {}", group.name()));
        }
        Ok(GSet { group: group.clone(), size, action })
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g * self.size + x] as usize
    }

    /// The one-point set.
    pub fn point(group: &GroupRef) -> GSet {
        GSet { group: group.clone(), size: 1, action: vec![0; group.order()] }
    }

    /// Orbits, each listed from its least point, ordered by that point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = Bits::new(self.size);
        let mut out = Vec::new();
        for x in 0..self.size {
            if seen.contains(x) {
                continue;
            }
            let mut orbit = Vec::new();
            for g in 0..self.group.order() {
                let y = self.act(g, x);
                if seen.insert(y) {
                    orbit.push(y);
                }
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    pub fn stabilizer(&self, x: usize) -> Bits {
        Bits::from_iter(self.group.order(), (0..self.group.order()).filter(|&g| self.act(g, x) == x))
    }

    pub fn disjoint_union(&self, other: &GSet) -> Result<GSet> {
        if *self.group != *other.group {
            return validation("disjoint union needs a common group");
        }
        let size = self.size + other.size;
        let mut action = Vec::with_capacity(self.group.order() * size);
        for g in 0..self.group.order() {
            action.extend((0..self.size).map(|x| self.act(g, x) as u32));
            action.extend((0..other.size).map(|x| (self.size + other.act(g, x)) as u32));
        }
        Ok(GSet { group: self.group.clone(), size, action })
    }

    /// Diagonal action on `X × Y`, point `(x,y)` at `x·|Y| + y`.
    pub fn product(&self, other: &GSet) -> Result<GSet> {
        if *self.group != *other.group {
            return validation("product needs a common group");
        }
        let size = self.size * other.size;
        let mut action = Vec::with_capacity(self.group.order() * size);
        for g in 0..self.group.order() {
            for x in 0..self.size {
                for y in 0..other.size {
                    action.push((self.act(g, x) * other.size + other.act(g, y)) as u32);
                }
            }
        }
        Ok(GSet { group: self.group.clone(), size, action })
    }
}

/// Left cosets `xK`, numbered in order of their least element, and the
/// coset index of each group element.
fn cosets(g: &GroupRef, k: &Bits) -> (Vec<usize>, Vec<u32>) {
    let kel: Vec<usize> = k.iter().collect();
    let mut coset_of = vec![u32::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if coset_of[x] != u32::MAX {
            continue;
        }
        for &y in &kel {
            coset_of[g.mul(x, y)] = reps.len() as u32;
        }
        reps.push(x);
    }
    (reps, coset_of)
}

/// `G/K` with left translation.
pub fn coset_gset(g: &GroupRef, k: &Bits) -> Result<GSet> {
    if !g.is_subgroup_set(k) {
        return validation(format!("not a subgroup of {}", g.name()));
    }
    let (reps, coset_of) = cosets(g, k);
    let size = reps.len();
    let mut action = Vec::with_capacity(g.order() * size);
    for a in 0..g.order() {
        action.extend(reps.iter().map(|&r| coset_of[g.mul(a, r)]));
    }
    Ok(GSet { group: g.clone(), size, action })
}

/// Multiset of point-stabilizer classes.
pub fn orbit_decompose(x: &GSet) -> BurnsideElt {
    let g = &x.group;
    let lat = g.lattice();
    let mut coeffs = vec![q(0); lat.classes().len()];
    for orbit in x.orbits() {
        let h = lat.index_of(&x.stabilizer(orbit[0])).expect("stabilizer is a subgroup");
        coeffs[lat.class_of(h)] += q(1);
    }
    BurnsideElt::from_coeffs(g, coeffs).expect("length matches")
}

/// An `(H,G)`-biset: `left[h·size + u] = h·u`, `right[g·size + u] = u·g`.
#[derive(Debug, Clone)]
pub struct Biset {
    left_group: GroupRef,
    right_group: GroupRef,
    size: usize,
    left: Vec<u32>,
    right: Vec<u32>,
}

impl Biset {
    pub fn new(left_group: &GroupRef, right_group: &GroupRef, size: usize, left: Vec<u32>, right: Vec<u32>) -> Result<Biset> {
        let (h, g) = (left_group.order(), right_group.order());
        if left.len() != h * size || right.len() != g * size || left.iter().chain(&right).any(|&y| y as usize >= size) {
            return validation("biset action tables have the wrong shape");
        }
        let lact = |a: usize, u: usize| left[a * size + u] as usize;
        let ract = |u: usize, b: usize| right[b * size + u] as usize;
        let left_ok = check_action(h, size, left_group.generators(), lact, |a, b| left_group.mul(a, b));
        // a right action is a left action of the opposite group
        let right_ok = check_action(g, size, right_group.generators(), |b, u| ract(u, b), |a, b| right_group.mul(b, a));
        if !left_ok || !right_ok {
            return validation("biset actions are not actions");
        }
        let commute = (0..size).all(|u| {
            left_group.generators().iter().all(|&a| {
                right_group.generators().iter().all(|&b| ract(lact(a as usize, u), b as usize) == lact(a as usize, ract(u, b as usize)))
            })
        });
        if !commute {
            return validation("left and right actions do not commute");
        }
        Ok(Biset { left_group: left_group.clone(), right_group: right_group.clone(), size, left, right })
    }

    pub fn left_group(&self) -> &GroupRef {
        &self.left_group
    }

    pub fn right_group(&self) -> &GroupRef {
        &self.right_group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn left_act(&self, h: usize, u: usize) -> usize {
        self.left[h * self.size + u] as usize
    }

    pub fn right_act(&self, u: usize, g: usize) -> usize {
        self.right[g * self.size + u] as usize
    }

    /// `G` as a `(G,G)`-biset.
    pub fn identity(g: &GroupRef) -> Biset {
        let n = g.order();
        let mut left = Vec::with_capacity(n * n);
        let mut right = Vec::with_capacity(n * n);
        for a in 0..n {
            left.extend((0..n).map(|u| g.mul(a, u) as u32));
            right.extend((0..n).map(|u| g.mul(u, a) as u32));
        }
        Biset { left_group: g.clone(), right_group: g.clone(), size: n, left, right }
    }
}

/// The biset realizing an elementary operation `A(source) → A(target)`:
/// a `(target, source)`-biset whose underlying set is the larger group.
pub fn elementary_biset(op: &BisetOp) -> Biset {
    let hom = op.hom();
    let (lg, rg) = (op.target().clone(), op.source().clone());
    // the underlying set is the codomain of the homomorphism
    let base = hom.target().clone();
    let n = base.order();
    let mut left = Vec::with_capacity(lg.order() * n);
    let mut right = Vec::with_capacity(rg.order() * n);
    match op.kind() {
        OpKind::Res | OpKind::Inf => {
            // left through the homomorphism, right by multiplication
            for a in 0..lg.order() {
                left.extend((0..n).map(|u| base.mul(hom.apply(a), u) as u32));
            }
            for b in 0..rg.order() {
                right.extend((0..n).map(|u| base.mul(u, b) as u32));
            }
        }
        OpKind::Ind | OpKind::Def | OpKind::Iso => {
            for a in 0..lg.order() {
                left.extend((0..n).map(|u| base.mul(a, u) as u32));
            }
            for b in 0..rg.order() {
                right.extend((0..n).map(|u| base.mul(u, hom.apply(b)) as u32));
            }
        }
    }
    Biset { left_group: lg, right_group: rg, size: n, left, right }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root so roots are least members
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// `U ×_G X` as a set: the class of each pair `(u,x)` at `u·|X| + x`.
fn tensor_classes(u: &Biset, xs: usize, act: impl Fn(usize, usize) -> usize) -> (Vec<usize>, Vec<u32>) {
    let total = u.size * xs;
    let mut uf = UnionFind((0..total).collect());
    // (u·s, x) ~ (u, s·x) for generators s suffices
    for &s in u.right_group.generators() {
        for p in 0..u.size {
            for x in 0..xs {
                uf.union(u.right_act(p, s as usize) * xs + x, p * xs + act(s as usize, x));
            }
        }
    }
    let mut class_of = vec![u32::MAX; total];
    let mut reps = Vec::new();
    for i in 0..total {
        let r = uf.find(i);
        if class_of[r] == u32::MAX {
            class_of[r] = reps.len() as u32;
            reps.push(r);
        }
        class_of[i] = class_of[r];
    }
    (reps, class_of)
}

pub fn tensor(u: &Biset, x: &GSet) -> Result<GSet> {
    if *u.right_group != *x.group {
        return validation(format!("biset over {} cannot act on a {}-set", u.right_group.name(), x.group.name()));
    }
    let (reps, class_of) = tensor_classes(u, x.size, |g, p| x.act(g, p));
    let size = reps.len();
    let mut action = Vec::with_capacity(u.left_group.order() * size);
    for h in 0..u.left_group.order() {
        action.extend(reps.iter().map(|&r| class_of[u.left_act(h, r / x.size) * x.size + r % x.size]));
    }
    Ok(GSet { group: u.left_group.clone(), size, action })
}

/// An equivariant map of G-sets.
#[derive(Debug, Clone)]
pub struct GMap {
    source: GSet,
    target: GSet,
    image: Vec<u32>,
}

impl GMap {
    pub fn new(source: GSet, target: GSet, image: Vec<u32>) -> Result<GMap> {
        if *source.group != *target.group {
            return validation("morphism ends over different groups");
        }
        if image.len() != source.size || image.iter().any(|&y| y as usize >= target.size) {
            return validation("map table has the wrong shape");
        }
        let equivariant = source.group.generators().iter().all(|&g| {
            (0..source.size).all(|x| image[source.act(g as usize, x)] as usize == target.act(g as usize, image[x] as usize))
        });
        if !equivariant {
            return validation("map is not equivariant");
        }
        Ok(GMap { source, target, image })
    }

    pub fn identity(x: &GSet) -> GMap {
        GMap { source: x.clone(), target: x.clone(), image: (0..x.size as u32).collect() }
    }

    /// The projection `G/S → G/T`, `xS ↦ xT`, for `S ≤ T`.
    pub fn coset_projection(g: &GroupRef, t: &Bits, s: &Bits) -> Result<GMap> {
        if !s.is_subset(t) {
            return validation("projection G/S → G/T needs S ≤ T");
        }
        let src = coset_gset(g, s)?;
        let tgt = coset_gset(g, t)?;
        let (sreps, _) = cosets(g, s);
        let (_, tcoset) = cosets(g, t);
        let image = sreps.iter().map(|&r| tcoset[r]).collect();
        GMap::new(src, tgt, image)
    }

    pub fn source(&self) -> &GSet {
        &self.source
    }

    pub fn target(&self) -> &GSet {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x] as usize
    }

    /// `f ⊔ g : X₁ ⊔ X₂ → Y₁ ⊔ Y₂`.
    pub fn disjoint_union(&self, other: &GMap) -> Result<GMap> {
        let source = self.source.disjoint_union(&other.source)?;
        let target = self.target.disjoint_union(&other.target)?;
        let shift = self.target.size as u32;
        let image = self.image.iter().copied().chain(other.image.iter().map(|&y| y + shift)).collect();
        GMap::new(source, target, image)
    }

    /// The product morphism `X × Z → Y × W` over the common group.
    pub fn product(&self, other: &GMap) -> Result<GMap> {
        let source = self.source.product(&other.source)?;
        let target = self.target.product(&other.target)?;
        let ts = other.target.size;
        let image = (0..self.source.size)
            .flat_map(|x| (0..other.source.size).map(move |z| (x, z)))
            .map(|(x, z)| (self.apply(x) * ts + other.apply(z)) as u32)
            .collect();
        GMap::new(source, target, image)
    }
}

/// `Σ_{x ∈ [G\X]} ⟨G_{f(x)}, G_x⟩`.
pub fn decompose_morphism(f: &GMap) -> SliceElt {
    let g = &f.source.group;
    let lat = g.lattice();
    let sc = g.slice_classes();
    let mut coeffs = vec![q(0); sc.len()];
    for orbit in f.source.orbits() {
        let x = orbit[0];
        let s = lat.index_of(&f.source.stabilizer(x)).expect("stabilizer");
        let t = lat.index_of(&f.target.stabilizer(f.apply(x))).expect("stabilizer");
        coeffs[sc.class_of(t, s).expect("G_x ≤ G_f(x)")] += q(1);
    }
    SliceElt::from_coeffs(g, coeffs).expect("length matches")
}

/// External product over `G × H` of `f` over `G` and `k` over `H`.
pub fn gmor_product(f: &GMap, k: &GMap) -> Result<GMap> {
    let dp = direct_product(&f.source.group, &k.source.group)?;
    let nh = k.source.group.order();
    let lift = |a: &GSet, b: &GSet| {
        let size = a.size * b.size;
        let mut action = Vec::with_capacity(dp.group.order() * size);
        for gh in 0..dp.group.order() {
            let (g, h) = (gh / nh, gh % nh);
            for x in 0..a.size {
                for y in 0..b.size {
                    action.push((a.act(g, x) * b.size + b.act(h, y)) as u32);
                }
            }
        }
        GSet { group: dp.group.clone(), size, action }
    };
    let source = lift(&f.source, &k.source);
    let target = lift(&f.target, &k.target);
    let ts = k.target.size;
    let image = (0..f.source.size)
        .flat_map(|x| (0..k.source.size).map(move |z| (x, z)))
        .map(|(x, z)| (f.apply(x) * ts + k.apply(z)) as u32)
        .collect();
    GMap::new(source, target, image)
}

/// `U ×_G X → U ×_G Y`.
pub fn gmor_tensor(u: &Biset, f: &GMap) -> Result<GMap> {
    let source = tensor(u, &f.source)?;
    let target = tensor(u, &f.target)?;
    let (sreps, _) = tensor_classes(u, f.source.size, |g, p| f.source.act(g, p));
    let (_, tclass) = tensor_classes(u, f.target.size, |g, p| f.target.act(g, p));
    let ys = f.target.size;
    let image = sreps.iter().map(|&r| tclass[(r / f.source.size) * ys + f.apply(r % f.source.size)]).collect();
    GMap::new(source, target, image)
}
