//! Subgroup lattice, conjugacy classes, Möbius function and slice classes.

use std::collections::HashMap;

use once_cell::sync::OnceCell;

use super::Group;
use crate::bits::Bits;
use crate::error::{validation, Result};

#[derive(Debug, Clone)]
pub struct Subgroup {
    elements: Vec<u32>,
    bits: Bits,
    gens: Vec<u32>,
}

impl Subgroup {
    pub fn elements(&self) -> &[u32] {
        &self.elements
    }
    pub fn bits(&self) -> &Bits {
        &self.bits
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn generators(&self) -> &[u32] {
        &self.gens
    }
}

#[derive(Debug, Clone)]
pub struct SubgroupClass {
    pub rep: usize,
    pub members: Vec<usize>,
}

pub struct SubgroupLattice {
    group_order: usize,
    subs: Vec<Subgroup>,
    index: HashMap<Bits, usize>,
    /// `below[h]` holds every `k` with `K ≤ H`.
    below: Vec<Bits>,
    below_lists: Vec<Vec<u32>>,
    /// `conj[g][h]` is the index of `g H g⁻¹`.
    conj: Vec<Vec<u32>>,
    classes: Vec<SubgroupClass>,
    class_of: Vec<usize>,
    moebius: OnceCell<MoebiusTable>,
}

impl SubgroupLattice {
    pub(crate) fn compute(g: &Group) -> SubgroupLattice {
        let n = g.order();
        let trivial = Subgroup {
            elements: vec![0],
            bits: Bits::from_iter(n, [0]),
            gens: vec![],
        };
        let mut subs = vec![trivial];
        let mut index: HashMap<Bits, usize> = HashMap::new();
        index.insert(subs[0].bits.clone(), 0);
        // cyclic extension: close <H, x> for every known H and x outside H
        let mut i = 0;
        while i < subs.len() {
            let h = subs[i].clone();
            if h.order() < n {
                for x in 1..n {
                    if h.bits.contains(x) {
                        continue;
                    }
                    let (bits, gens) = extend(g, &h, x);
                    if !index.contains_key(&bits) {
                        index.insert(bits.clone(), subs.len());
                        subs.push(Subgroup {
                            elements: bits.iter().map(|e| e as u32).collect(),
                            bits,
                            gens,
                        });
                    }
                }
            }
            i += 1;
        }
        subs.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
        let index: HashMap<Bits, usize> = subs.iter().enumerate().map(|(i, s)| (s.bits.clone(), i)).collect();
        let m = subs.len();

        let mut below = vec![Bits::new(m); m];
        let mut below_lists = vec![Vec::new(); m];
        for h in 0..m {
            let ho = subs[h].order();
            for k in 0..=h {
                let ko = subs[k].order();
                if ho % ko == 0 && subs[k].bits.is_subset(&subs[h].bits) {
                    below[h].insert(k);
                    below_lists[h].push(k as u32);
                }
            }
        }

        // conjugation action, built along the Cayley graph: c_{xs} = c_x ∘ c_s
        let gens: Vec<usize> = if g.generators().is_empty() {
            vec![]
        } else {
            g.generators().iter().map(|&s| s as usize).collect()
        };
        let conj_image = |s: usize, k: usize| -> u32 {
            let bits = Bits::from_iter(n, subs[k].elements.iter().map(|&e| g.conj(s, e as usize)));
            index[&bits] as u32
        };
        let gen_perms: Vec<Vec<u32>> = gens.iter().map(|&s| (0..m).map(|k| conj_image(s, k)).collect()).collect();
        let mut conj: Vec<Vec<u32>> = vec![Vec::new(); n];
        conj[0] = (0..m as u32).collect();
        let mut queue = vec![0usize];
        while let Some(x) = queue.pop() {
            for (gi, &s) in gens.iter().enumerate() {
                let y = g.mul(x, s);
                if conj[y].is_empty() {
                    let px = &conj[x];
                    conj[y] = gen_perms[gi].iter().map(|&k| px[k as usize]).collect();
                    queue.push(y);
                }
            }
        }
        debug_assert!(conj.iter().all(|p| p.len() == m));

        let mut class_of = vec![usize::MAX; m];
        let mut classes = Vec::new();
        for h in 0..m {
            if class_of[h] != usize::MAX {
                continue;
            }
            let c = classes.len();
            let mut members = vec![h];
            class_of[h] = c;
            let mut stack = vec![h];
            while let Some(k) = stack.pop() {
                for p in &gen_perms {
                    let j = p[k] as usize;
                    if class_of[j] == usize::MAX {
                        class_of[j] = c;
                        members.push(j);
                        stack.push(j);
                    }
                }
            }
            members.sort_unstable();
            classes.push(SubgroupClass { rep: h, members });
        }

        SubgroupLattice {
            group_order: n,
            subs,
            index,
            below,
            below_lists,
            conj,
            classes,
            class_of,
            moebius: OnceCell::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subs
    }

    pub fn subgroup(&self, i: usize) -> &Subgroup {
        &self.subs[i]
    }

    pub fn index_of(&self, bits: &Bits) -> Option<usize> {
        self.index.get(bits).copied()
    }

    pub fn index_of_checked(&self, bits: &Bits) -> Result<usize> {
        match self.index_of(bits) {
            Some(i) => Ok(i),
            None => validation(format!("{bits:?} is not a subgroup")),
        }
    }

    pub fn trivial(&self) -> usize {
        0
    }

    pub fn full(&self) -> usize {
        self.subs.len() - 1
    }

    /// `K ≤ H`
    #[inline]
    pub fn is_below(&self, k: usize, h: usize) -> bool {
        self.below[h].contains(k)
    }

    /// All `K ≤ H`, in increasing index order.
    pub fn below(&self, h: usize) -> impl Iterator<Item = usize> + '_ {
        self.below_lists[h].iter().map(|&k| k as usize)
    }

    pub fn below_count(&self, h: usize) -> usize {
        self.below_lists[h].len()
    }

    /// Index of `g H g⁻¹`.
    #[inline]
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.conj[g][h] as usize
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn class_of(&self, h: usize) -> usize {
        self.class_of[h]
    }

    pub fn class_rep(&self, c: usize) -> usize {
        self.classes[c].rep
    }

    pub fn normalizer_order(&self, h: usize) -> usize {
        self.group_order / self.classes[self.class_of[h]].members.len()
    }

    pub fn normalizer(&self, h: usize) -> Bits {
        Bits::from_iter(
            self.group_order,
            (0..self.group_order).filter(|&g| self.conjugate(g, h) == h),
        )
    }

    pub fn is_normal(&self, h: usize) -> bool {
        self.classes[self.class_of[h]].members.len() == 1
    }

    pub fn normal_subgroups(&self) -> Vec<usize> {
        (0..self.subs.len()).filter(|&h| self.is_normal(h)).collect()
    }

    /// Nontrivial normal subgroups with no nontrivial normal subgroup strictly below.
    pub fn minimal_normal_subgroups(&self) -> Vec<usize> {
        let normals = self.normal_subgroups();
        normals
            .iter()
            .copied()
            .filter(|&n| n != 0 && !normals.iter().any(|&m| m != 0 && m != n && self.is_below(m, n)))
            .collect()
    }

    /// Proper subgroups not properly contained in another proper subgroup.
    pub fn maximal_subgroups(&self) -> Vec<usize> {
        let full = self.full();
        (0..full)
            .filter(|&h| !(h + 1..full).any(|k| self.is_below(h, k)))
            .collect()
    }

    /// Index of the subgroup generated by the union of `a` and `b`.
    pub fn join(&self, g: &Group, a: usize, b: usize) -> usize {
        let mut gens: Vec<usize> = self.subs[a].gens.iter().map(|&x| x as usize).collect();
        gens.extend(self.subs[b].gens.iter().map(|&x| x as usize));
        self.index[&g.generate(&gens)]
    }

    pub fn intersect(&self, a: usize, b: usize) -> usize {
        self.index[&self.subs[a].bits.intersection(&self.subs[b].bits)]
    }

    pub fn moebius(&self) -> &MoebiusTable {
        self.moebius.get_or_init(|| MoebiusTable::compute(self))
    }
}

/// `<H, x>` by left-coset closure; `H` is a union of its cosets.
fn extend(g: &Group, h: &Subgroup, x: usize) -> (Bits, Vec<u32>) {
    let mut gens: Vec<u32> = h.gens.clone();
    gens.push(x as u32);
    let mut set = h.bits.clone();
    let mut reps = vec![0usize];
    let mut i = 0;
    while i < reps.len() {
        let r = reps[i];
        i += 1;
        for &s in &gens {
            let y = g.mul(s as usize, r);
            if !set.contains(y) {
                for &e in &h.elements {
                    set.insert(g.mul(y, e as usize));
                }
                reps.push(y);
            }
        }
    }
    (set, gens)
}

/// Möbius function of the subgroup lattice, stored per upper end:
/// `column[h]` lists `(k, μ(K,H))` for every `K ≤ H`.
pub struct MoebiusTable {
    column: Vec<HashMap<u32, i64>>,
}

impl MoebiusTable {
    fn compute(lat: &SubgroupLattice) -> MoebiusTable {
        let m = lat.len();
        let column = (0..m)
            .map(|h| {
                // μ(H,H) = 1, μ(K,H) = -Σ_{K<L≤H} μ(L,H), from the top down
                let below: Vec<usize> = lat.below(h).collect();
                let mut col: HashMap<u32, i64> = HashMap::with_capacity(below.len());
                for &k in below.iter().rev() {
                    if k == h {
                        col.insert(k as u32, 1);
                        continue;
                    }
                    let mut s = 0i64;
                    for &l in below.iter().filter(|&&l| l > k) {
                        if lat.is_below(k, l) {
                            s += col[&(l as u32)];
                        }
                    }
                    col.insert(k as u32, -s);
                }
                col
            })
            .collect();
        MoebiusTable { column }
    }

    /// `μ(K,H)`; errors on incomparable pairs.
    pub fn get(&self, k: usize, h: usize) -> Result<i64> {
        match self.column[h].get(&(k as u32)) {
            Some(&v) => Ok(v),
            None => validation(format!("subgroups {k} and {h} are not comparable")),
        }
    }

    /// `μ(K,H)` for `K ≤ H`, zero otherwise.
    pub fn mu(&self, k: usize, h: usize) -> i64 {
        self.column[h].get(&(k as u32)).copied().unwrap_or(0)
    }

    pub fn column(&self, h: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.column[h].iter().map(|(&k, &v)| (k as usize, v))
    }
}

#[derive(Debug, Clone)]
pub struct SliceClass {
    /// Larger member `T`.
    pub t: usize,
    /// Smaller member `S ≤ T`.
    pub s: usize,
    /// `|N_G(T) ∩ N_G(S)|`
    pub stabilizer_order: usize,
    pub members: Vec<(u32, u32)>,
}

/// Conjugacy classes of slices `(T,S)`, `S ≤ T`.
pub struct SliceClasses {
    classes: Vec<SliceClass>,
    lookup: HashMap<(u32, u32), u32>,
}

impl SliceClasses {
    pub(crate) fn compute(g: &Group, lat: &SubgroupLattice) -> SliceClasses {
        let n = g.order();
        let gens: Vec<usize> = g.generators().iter().map(|&s| s as usize).collect();
        let mut lookup: HashMap<(u32, u32), u32> = HashMap::new();
        let mut raw: Vec<SliceClass> = Vec::new();
        for t in 0..lat.len() {
            for s in lat.below(t) {
                if lookup.contains_key(&(t as u32, s as u32)) {
                    continue;
                }
                let c = raw.len() as u32;
                let mut members = vec![(t as u32, s as u32)];
                lookup.insert((t as u32, s as u32), c);
                let mut i = 0;
                while i < members.len() {
                    let (a, b) = members[i];
                    i += 1;
                    for &x in &gens {
                        let p = (lat.conjugate(x, a as usize) as u32, lat.conjugate(x, b as usize) as u32);
                        if let std::collections::hash_map::Entry::Vacant(e) = lookup.entry(p) {
                            e.insert(c);
                            members.push(p);
                        }
                    }
                }
                members.sort_unstable();
                // orbits are discovered from their least (t, s) pair
                let (t0, s0) = members[0];
                raw.push(SliceClass {
                    t: t0 as usize,
                    s: s0 as usize,
                    stabilizer_order: n / members.len(),
                    members,
                });
            }
        }
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by_key(|&i| {
            let c = &raw[i];
            (lat.subgroup(c.t).order(), lat.subgroup(c.s).order(), c.t, c.s)
        });
        let mut renumber = vec![0u32; raw.len()];
        for (new, &old) in order.iter().enumerate() {
            renumber[old] = new as u32;
        }
        for v in lookup.values_mut() {
            *v = renumber[*v as usize];
        }
        let mut slots: Vec<Option<SliceClass>> = raw.into_iter().map(Some).collect();
        let classes = order.iter().map(|&i| slots[i].take().unwrap()).collect();
        SliceClasses { classes, lookup }
    }

    pub fn classes(&self) -> &[SliceClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, t: usize, s: usize) -> Option<usize> {
        self.lookup.get(&(t as u32, s as u32)).map(|&c| c as usize)
    }
}

#[cfg(test)]
mod tests {
    use crate::grp::parse_group_spec;

    #[test]
    fn subgroup_counts() {
        let s3 = parse_group_spec("S3").unwrap();
        assert_eq!(s3.lattice().len(), 6);
        assert_eq!(parse_group_spec("C4").unwrap().lattice().len(), 3);
        assert_eq!(parse_group_spec("1").unwrap().lattice().len(), 1);
        let orders: Vec<usize> = s3.lattice().subgroups().iter().map(|h| h.order()).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
    }

    #[test]
    fn classes_and_normalizers() {
        let s3 = parse_group_spec("S3").unwrap();
        let lat = s3.lattice();
        assert_eq!(lat.classes().len(), 4);
        assert_eq!(parse_group_spec("V4").unwrap().lattice().classes().len(), 5);
        assert_eq!(parse_group_spec("C7").unwrap().lattice().classes().len(), 2);
        let c3 = lat.subgroups().iter().position(|h| h.order() == 3).unwrap();
        assert_eq!(lat.normalizer(c3).count(), 6);
        assert_eq!(lat.normalizer(lat.full()).count(), 6);
        let normal_orders: Vec<usize> = lat.normal_subgroups().iter().map(|&h| lat.subgroup(h).order()).collect();
        assert_eq!(normal_orders, vec![1, 3, 6]);
        // representatives are lexicographically least members
        for c in lat.classes() {
            assert_eq!(c.rep, *c.members.iter().min().unwrap());
        }
    }

    #[test]
    fn moebius_values() {
        let v4 = parse_group_spec("V4").unwrap();
        let lat = v4.lattice();
        let mu = lat.moebius();
        assert_eq!(mu.get(0, lat.full()).unwrap(), 2);
        assert_eq!(mu.get(1, 1).unwrap(), 1);
        assert!(mu.get(1, 2).is_err());
        let c5 = parse_group_spec("C5").unwrap();
        assert_eq!(c5.lattice().moebius().get(0, 1).unwrap(), -1);
    }

    #[test]
    fn slice_class_counts() {
        assert_eq!(parse_group_spec("1").unwrap().slice_classes().len(), 1);
        let c2 = parse_group_spec("C2").unwrap();
        let sc = c2.slice_classes();
        let pairs: Vec<(usize, usize)> = sc.classes().iter().map(|c| (c.t, c.s)).collect();
        assert_eq!(pairs, vec![(0, 0), (1, 0), (1, 1)]);
        assert_eq!(parse_group_spec("S3").unwrap().slice_classes().len(), 9);
    }

    #[test]
    fn maximal_and_minimal_normal() {
        let s4 = parse_group_spec("S4").unwrap();
        let lat = s4.lattice();
        let mut max_orders: Vec<usize> = lat.maximal_subgroups().iter().map(|&h| lat.subgroup(h).order()).collect();
        max_orders.sort();
        max_orders.dedup();
        assert_eq!(max_orders, vec![6, 8, 12]);
        let mins: Vec<usize> = lat.minimal_normal_subgroups().iter().map(|&h| lat.subgroup(h).order()).collect();
        assert_eq!(mins, vec![4]);
    }
}
