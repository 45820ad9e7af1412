//! Finite groups stored as full multiplication tables.
//!
//! Groups are built from permutation generators, direct products, quotients
//! and subgroups. Everything derived from a group (subgroup lattice, slice
//! classes, Möbius function) is computed lazily and cached on the group.

mod catalog;
mod hom;
mod iso;
mod lattice;

pub use catalog::{catalog, catalog_names, catalog_up_to, parse_group_spec, GroupRecord};
pub use hom::GroupHom;
pub use iso::{are_isomorphic, find_isomorphism_with};
pub use lattice::{MoebiusTable, SliceClass, SliceClasses, Subgroup, SubgroupClass, SubgroupLattice};

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use once_cell::sync::OnceCell;

use crate::bits::Bits;
use crate::error::{validation, Error, Result};

static BASE_CAP: AtomicUsize = AtomicUsize::new(128);
static PRODUCT_CAP: AtomicUsize = AtomicUsize::new(4096);

/// Order caps: `base` bounds groups built from generators, `product` bounds
/// transient product groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub base: usize,
    pub product: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { base: 128, product: 4096 }
    }
}

pub fn caps() -> Caps {
    Caps {
        base: BASE_CAP.load(Ordering::Relaxed),
        product: PRODUCT_CAP.load(Ordering::Relaxed),
    }
}

pub fn set_caps(c: Caps) {
    BASE_CAP.store(c.base, Ordering::Relaxed);
    PRODUCT_CAP.store(c.product, Ordering::Relaxed);
}

pub(crate) fn check_cap(what: impl Into<String>, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::Resource {
            what: what.into(),
            size,
            cap,
        })
    } else {
        Ok(())
    }
}

pub type GroupRef = Arc<Group>;

type InternKey = (String, Vec<u32>);

static INTERNER: once_cell::sync::Lazy<Mutex<HashMap<InternKey, GroupRef>>> =
    once_cell::sync::Lazy::new(|| Mutex::new(HashMap::new()));

/// Returns the shared instance for this name and multiplication table, so
/// that rebuilding a product, quotient or subgroup reuses one lazily
/// computed lattice. The name is part of the key to keep names independent
/// of construction order.
pub(crate) fn intern(g: Group) -> GroupRef {
    let mut map = INTERNER.lock().expect("group interner poisoned");
    map.entry((g.name.clone(), g.table.clone())).or_insert_with(|| Arc::new(g)).clone()
}

pub struct Group {
    name: String,
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    element_orders: Vec<u32>,
    gens: Vec<u32>,
    lattice: OnceCell<Arc<SubgroupLattice>>,
    slices: OnceCell<Arc<SliceClasses>>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({}, order {})", self.name, self.order)
    }
}

impl PartialEq for Group {
    /// Equality of presentations: same labelled multiplication table.
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}
impl Eq for Group {}

impl Group {
    /// Builds a group from a table whose identity is element 0.
    pub(crate) fn from_table(name: impl Into<String>, order: usize, table: Vec<u32>, gens: Vec<u32>) -> Group {
        debug_assert_eq!(table.len(), order * order);
        let mut inverses = vec![0u32; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inverses[a] = b as u32;
                    break;
                }
            }
        }
        let mut element_orders = vec![1u32; order];
        for (a, slot) in element_orders.iter_mut().enumerate() {
            let mut x = a;
            let mut k = 1;
            while x != 0 {
                x = table[x * order + a] as usize;
                k += 1;
            }
            *slot = k;
        }
        Group {
            name: name.into(),
            order,
            table,
            inverses,
            element_orders,
            gens,
            lattice: OnceCell::new(),
            slices: OnceCell::new(),
        }
    }

    /// Generated permutation group on `{0..degree-1}`; elements are numbered
    /// breadth-first over generator words, generators in input order.
    pub fn from_permutations(name: impl Into<String>, degree: usize, generators: &[Vec<usize>]) -> Result<GroupRef> {
        let name = name.into();
        for (i, g) in generators.iter().enumerate() {
            if g.len() != degree {
                return validation(format!("generator {i} has length {} but degree is {degree}", g.len()));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x >= degree || std::mem::replace(&mut seen[x], true) {
                    return validation(format!("generator {i} is not a bijection on 0..{degree}"));
                }
            }
        }
        let cap = caps().base;
        let identity: Vec<u32> = (0..degree as u32).collect();
        let gens: Vec<Vec<u32>> = generators
            .iter()
            .map(|g| g.iter().map(|&x| x as u32).collect())
            .collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        index.insert(identity, 0);
        let mut queue = VecDeque::from([0usize]);
        // product p*s means apply s first, then p
        let compose = |p: &[u32], s: &[u32]| -> Vec<u32> { s.iter().map(|&x| p[x as usize]).collect() };
        while let Some(i) = queue.pop_front() {
            for s in &gens {
                let prod = compose(&elements[i], s);
                if !index.contains_key(&prod) {
                    check_cap(format!("closure of {name}"), elements.len() + 1, cap)?;
                    index.insert(prod.clone(), elements.len() as u32);
                    queue.push_back(elements.len());
                    elements.push(prod);
                }
            }
        }
        let n = elements.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&compose(&elements[a], &elements[b])];
            }
        }
        let gen_idx = gens.iter().map(|g| index[g]).filter(|&g| g != 0).collect();
        Ok(intern(Group::from_table(name, n, table, gen_idx)))
    }

    pub fn trivial() -> GroupRef {
        intern(Group::from_table("1", 1, vec![0], vec![]))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    /// `g x g⁻¹`
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_orders(&self) -> &[u32] {
        &self.element_orders
    }

    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center_size(&self) -> usize {
        (0..self.order)
            .filter(|&a| self.gens.iter().all(|&g| self.mul(a, g as usize) == self.mul(g as usize, a)))
            .count()
    }

    /// Exhaustive check of the group axioms on the table.
    pub fn verify_axioms(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(Error::Assertion(format!("{}: identity fails at {a}", self.name)));
            }
            if self.mul(a, self.inv(a)) != 0 || self.mul(self.inv(a), a) != 0 {
                return Err(Error::Assertion(format!("{}: no inverse for {a}", self.name)));
            }
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::Assertion(format!("{}: not associative at ({a},{b},{c})", self.name)));
                    }
                }
            }
        }
        for a in 0..n {
            let mut x = a;
            for _ in 1..self.element_orders[a] {
                if x == 0 {
                    return Err(Error::Assertion(format!("{}: order of {a} too large", self.name)));
                }
                x = self.mul(x, a);
            }
            if x != 0 {
                return Err(Error::Assertion(format!("{}: order of {a} wrong", self.name)));
            }
        }
        Ok(())
    }

    /// Element-order profile: sorted `(order, count)` pairs.
    pub fn order_profile(&self) -> Vec<(u32, usize)> {
        let mut m = std::collections::BTreeMap::new();
        for &o in &self.element_orders {
            *m.entry(o).or_insert(0usize) += 1;
        }
        m.into_iter().collect()
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        self.lattice.get_or_init(|| Arc::new(SubgroupLattice::compute(self)))
    }

    pub fn slice_classes(&self) -> &Arc<SliceClasses> {
        self.slices
            .get_or_init(|| Arc::new(SliceClasses::compute(self, self.lattice())))
    }

    /// Closure of a set of elements, as a sorted element list.
    pub fn generate(&self, gens: &[usize]) -> Bits {
        let mut set = Bits::new(self.order);
        set.insert(0);
        let mut queue = vec![0usize];
        while let Some(x) = queue.pop() {
            for &s in gens {
                let y = self.mul(s, x);
                if set.insert(y) {
                    queue.push(y);
                }
            }
        }
        set
    }

    pub fn is_subgroup_set(&self, set: &Bits) -> bool {
        if !set.contains(0) {
            return false;
        }
        let els: Vec<usize> = set.iter().collect();
        els.iter().all(|&a| els.iter().all(|&b| set.contains(self.mul(a, b))))
    }

    /// Left-to-right double coset representatives of `H\G/K`, one per coset,
    /// each the least element index of its coset.
    pub fn double_cosets(&self, h: &Bits, k: &Bits) -> Vec<usize> {
        let hs: Vec<usize> = h.iter().collect();
        let ks: Vec<usize> = k.iter().collect();
        let mut seen = Bits::new(self.order);
        let mut reps = Vec::new();
        for g in 0..self.order {
            if seen.contains(g) {
                continue;
            }
            reps.push(g);
            for &x in &hs {
                let xg = self.mul(x, g);
                for &y in &ks {
                    seen.insert(self.mul(xg, y));
                }
            }
        }
        reps
    }
}

/// `G × H` with element `(g,h)` at index `g·|H| + h`, plus the two
/// projections and the two injections.
pub struct DirectProduct {
    pub group: GroupRef,
    pub proj1: GroupHom,
    pub proj2: GroupHom,
    pub inj1: GroupHom,
    pub inj2: GroupHom,
}

pub fn direct_product(g: &GroupRef, h: &GroupRef) -> Result<DirectProduct> {
    let (m, n) = (g.order(), h.order());
    check_cap(format!("{}x{}", g.name(), h.name()), m * n, caps().product)?;
    let order = m * n;
    let mut table = vec![0u32; order * order];
    for a in 0..order {
        let (a1, a2) = (a / n, a % n);
        for b in 0..order {
            let (b1, b2) = (b / n, b % n);
            table[a * order + b] = (g.mul(a1, b1) * n + h.mul(a2, b2)) as u32;
        }
    }
    let mut gens: Vec<u32> = g.generators().iter().map(|&x| x * n as u32).collect();
    gens.extend(h.generators().iter().copied());
    let name = product_name(g.name(), h.name());
    let group = intern(Group::from_table(name, order, table, gens));
    let proj1 = GroupHom::new_unchecked(group.clone(), g.clone(), (0..order).map(|x| (x / n) as u32).collect());
    let proj2 = GroupHom::new_unchecked(group.clone(), h.clone(), (0..order).map(|x| (x % n) as u32).collect());
    let inj1 = GroupHom::new_unchecked(g.clone(), group.clone(), (0..m).map(|x| (x * n) as u32).collect());
    let inj2 = GroupHom::new_unchecked(h.clone(), group.clone(), (0..n).map(|x| x as u32).collect());
    Ok(DirectProduct {
        group,
        proj1,
        proj2,
        inj1,
        inj2,
    })
}

fn product_name(a: &str, b: &str) -> String {
    match (a, b) {
        ("1", b) => format!("1x{b}"),
        (a, b) => format!("{a}x{b}"),
    }
}

/// `G/N` with cosets ordered by their least element, and the projection.
pub fn quotient(g: &GroupRef, n: &Bits) -> Result<(GroupRef, GroupHom)> {
    if !g.is_subgroup_set(n) {
        return validation(format!("not a subgroup of {}", g.name()));
    }
    let nel: Vec<usize> = n.iter().collect();
    for x in 0..g.order() {
        for &y in &nel {
            if !n.contains(g.conj(x, y)) {
                return validation(format!("subgroup is not normal in {}", g.name()));
            }
        }
    }
    let mut coset_of = vec![u32::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if coset_of[x] != u32::MAX {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(x);
        for &y in &nel {
            coset_of[g.mul(x, y)] = c;
        }
    }
    let q = reps.len();
    let mut table = vec![0u32; q * q];
    for a in 0..q {
        for b in 0..q {
            table[a * q + b] = coset_of[g.mul(reps[a], reps[b])];
        }
    }
    let mut gens: Vec<u32> = g.generators().iter().map(|&s| coset_of[s as usize]).filter(|&c| c != 0).collect();
    gens.dedup();
    let name = if nel.len() == 1 {
        g.name().to_string()
    } else {
        format!("{}/N{}", g.name(), nel.len())
    };
    let group = intern(Group::from_table(name, q, table, gens));
    let proj = GroupHom::new_unchecked(g.clone(), group.clone(), coset_of);
    Ok((group, proj))
}

/// The subgroup `H` as a group in its own right (elements in increasing
/// parent order) and its inclusion into `G`.
pub fn subgroup_group(g: &GroupRef, h: &Bits) -> Result<(GroupRef, GroupHom)> {
    if !g.is_subgroup_set(h) {
        return validation(format!("not a subgroup of {}", g.name()));
    }
    let els: Vec<usize> = h.iter().collect();
    let mut pos = HashMap::new();
    for (i, &x) in els.iter().enumerate() {
        pos.insert(x, i as u32);
    }
    let k = els.len();
    let mut table = vec![0u32; k * k];
    for a in 0..k {
        for b in 0..k {
            table[a * k + b] = pos[&g.mul(els[a], els[b])];
        }
    }
    let gens = small_generating_set(&table, k);
    let name = if k == g.order() {
        g.name().to_string()
    } else {
        format!("{}<{}>", g.name(), k)
    };
    let group = intern(Group::from_table(name, k, table, gens));
    let incl = GroupHom::new_unchecked(group.clone(), g.clone(), els.iter().map(|&x| x as u32).collect());
    Ok((group, incl))
}

/// Greedy generating set: repeatedly add the least element outside the span.
fn small_generating_set(table: &[u32], n: usize) -> Vec<u32> {
    let mut span = Bits::new(n);
    span.insert(0);
    let mut gens: Vec<u32> = Vec::new();
    for x in 1..n {
        if span.contains(x) {
            continue;
        }
        gens.push(x as u32);
        let mut queue: Vec<usize> = span.iter().collect();
        while let Some(y) = queue.pop() {
            for &s in &gens {
                let z = table[s as usize * n + y] as usize;
                if span.insert(z) {
                    queue.push(z);
                }
            }
        }
    }
    gens
}

pub(crate) fn generating_set_of(g: &Group) -> Vec<u32> {
    small_generating_set(&g.table, g.order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm_group(degree: usize, gens: &[&[usize]]) -> GroupRef {
        let gens: Vec<Vec<usize>> = gens.iter().map(|g| g.to_vec()).collect();
        Group::from_permutations("G", degree, &gens).unwrap()
    }

    #[test]
    fn permutation_closures() {
        assert_eq!(perm_group(2, &[&[1, 0]]).order(), 2);
        let s3 = perm_group(3, &[&[1, 2, 0], &[1, 0, 2]]);
        assert_eq!(s3.order(), 6);
        s3.verify_axioms().unwrap();
        assert!(!s3.is_abelian());
        assert_eq!(perm_group(1, &[]).order(), 1);
    }

    #[test]
    fn non_bijective_generator_rejected() {
        let err = Group::from_permutations("bad", 3, &[vec![0, 0, 1]]).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        let err = Group::from_permutations("bad", 3, &[vec![0, 1]]).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn closure_respects_cap() {
        set_caps(Caps::default());
        // S6 has order 720
        let gens = vec![vec![1, 2, 3, 4, 5, 0], vec![1, 0, 2, 3, 4, 5]];
        let err = Group::from_permutations("S6", 6, &gens).unwrap_err();
        assert!(matches!(err, Error::Resource { cap: 128, .. }));
    }

    #[test]
    fn products_and_orders() {
        let c2 = perm_group(2, &[&[1, 0]]);
        let c3 = perm_group(3, &[&[1, 2, 0]]);
        let v4 = direct_product(&c2, &c2).unwrap().group;
        assert_eq!(v4.order(), 4);
        assert_eq!(v4.element_orders().iter().filter(|&&o| o == 2).count(), 3);
        let c6 = direct_product(&c2, &c3).unwrap().group;
        assert!(c6.element_orders().contains(&6));
        c6.verify_axioms().unwrap();
        let one = Group::trivial();
        let g1 = direct_product(&c3, &one).unwrap();
        assert!(are_isomorphic(&g1.group, &c3).is_some());
        assert!(g1.proj1.is_homomorphism() && g1.inj2.is_homomorphism());
    }

    #[test]
    fn quotients() {
        let s3 = perm_group(3, &[&[1, 2, 0], &[1, 0, 2]]);
        let c3 = s3.generate(&[1]);
        assert_eq!(c3.count(), 3);
        let (q, p) = quotient(&s3, &c3).unwrap();
        assert_eq!(q.order(), 2);
        assert!(p.is_homomorphism() && p.is_surjective());
        assert_eq!(p.kernel(), c3);
        let (q1, _) = quotient(&s3, &Bits::from_iter(6, [0])).unwrap();
        assert!(are_isomorphic(&q1, &s3).is_some());
        let all = Bits::from_iter(6, 0..6);
        assert_eq!(quotient(&s3, &all).unwrap().0.order(), 1);
        // a non-normal C2
        let c2 = s3.lattice().subgroups().iter().find(|h| h.order() == 2).unwrap().bits().clone();
        assert!(matches!(quotient(&s3, &c2), Err(Error::Validation(_))));
    }

    #[test]
    fn double_coset_counts() {
        let c2 = perm_group(2, &[&[1, 0]]);
        let one = Bits::from_iter(2, [0]);
        assert_eq!(c2.double_cosets(&one, &one).len(), 2);
        let s3 = perm_group(3, &[&[1, 2, 0], &[1, 0, 2]]);
        let h = s3.lattice().subgroups().iter().find(|h| h.order() == 2).unwrap().bits().clone();
        let reps = s3.double_cosets(&h, &h);
        assert_eq!(reps.len(), 2);
        let all = Bits::from_iter(6, 0..6);
        assert_eq!(s3.double_cosets(&all, &h).len(), 1);
    }
}
