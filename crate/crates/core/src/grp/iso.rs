//! Isomorphism search: invariant pruning, then backtracking over the images
//! of a small generating set.

use super::{generating_set_of, Group, GroupHom, GroupRef};

/// An isomorphism `G → H` if one exists.
pub fn are_isomorphic(g: &GroupRef, h: &GroupRef) -> Option<GroupHom> {
    if !cheap_invariants_match(g, h) {
        return None;
    }
    if g.order() <= 128 {
        let (lg, lh) = (g.lattice(), h.lattice());
        if lg.len() != lh.len() || lg.classes().len() != lh.classes().len() {
            return None;
        }
    }
    find_isomorphism_with(g, h, |_, _| true)
}

fn cheap_invariants_match(g: &Group, h: &Group) -> bool {
    g.order() == h.order()
        && g.order_profile() == h.order_profile()
        && g.is_abelian() == h.is_abelian()
        && g.center_size() == h.center_size()
}

/// An isomorphism `f: G → H` with `allowed(x, f(x))` for every `x`, if any.
pub fn find_isomorphism_with<F>(g: &GroupRef, h: &GroupRef, allowed: F) -> Option<GroupHom>
where
    F: Fn(usize, usize) -> bool,
{
    if g.order() != h.order() || g.order_profile() != h.order_profile() {
        return None;
    }
    let gens: Vec<usize> = generating_set_of(g).into_iter().map(|x| x as usize).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            (0..h.order())
                .filter(|&y| h.element_orders()[y] == g.element_orders()[s] && allowed(s, y))
                .collect()
        })
        .collect();
    let mut images = vec![0usize; gens.len()];
    let mut found = None;
    search(g, h, &gens, &candidates, &mut images, 0, &allowed, &mut found);
    found.map(|imgs| GroupHom::new_unchecked(g.clone(), h.clone(), imgs))
}

#[allow(clippy::too_many_arguments)]
fn search<F>(
    g: &Group,
    h: &Group,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
    depth: usize,
    allowed: &F,
    found: &mut Option<Vec<u32>>,
) where
    F: Fn(usize, usize) -> bool,
{
    if found.is_some() {
        return;
    }
    if depth == gens.len() {
        if let Some(map) = extend_to_hom(g, h, gens, images, allowed) {
            let mut hit = vec![false; h.order()];
            if map.iter().all(|&y| !std::mem::replace(&mut hit[y as usize], true)) {
                *found = Some(map);
            }
        }
        return;
    }
    for &y in &candidates[depth] {
        images[depth] = y;
        // partial consistency on the subgroup generated so far
        if extend_to_hom(g, h, &gens[..=depth], &images[..=depth], allowed).is_some() {
            search(g, h, gens, candidates, images, depth + 1, allowed, found);
            if found.is_some() {
                return;
            }
        }
    }
}

/// Extends `gens[i] ↦ images[i]` multiplicatively over `<gens>`; `None` on a
/// conflict, on non-injectivity, or if a constraint fails. The returned
/// vector has `u32::MAX` outside `<gens>`.
fn extend_to_hom<F>(g: &Group, h: &Group, gens: &[usize], images: &[usize], allowed: &F) -> Option<Vec<u32>>
where
    F: Fn(usize, usize) -> bool,
{
    let mut map = vec![u32::MAX; g.order()];
    let mut used = vec![false; h.order()];
    map[0] = 0;
    used[0] = true;
    let mut queue = vec![0usize];
    while let Some(x) = queue.pop() {
        let fx = map[x] as usize;
        for (&s, &t) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let fy = h.mul(fx, t);
            if map[y] == u32::MAX {
                if used[fy] || !allowed(y, fy) {
                    return None;
                }
                used[fy] = true;
                map[y] = fy as u32;
                queue.push(y);
            } else if map[y] as usize != fy {
                return None;
            }
        }
    }
    Some(map)
}
