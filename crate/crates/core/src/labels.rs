//! Human-readable names for groups, subgroup classes and slice classes.

use std::collections::HashMap;
use std::sync::Arc;

use once_cell::sync::Lazy;

use crate::grp::{are_isomorphic, catalog, subgroup_group, GroupRef};
use crate::memo::GroupMemo;

/// Largest order for which names are looked up in the catalog.
const CATALOG_LOOKUP: usize = 24;

fn is_cyclic(g: &GroupRef) -> bool {
    g.element_orders().iter().any(|&o| o as usize == g.order())
}

/// A name from the isomorphism type alone: `1`, `C<n>`, a catalog name, or `G<n>`.
pub fn structural_name(g: &GroupRef) -> String {
    let n = g.order();
    if n == 1 {
        return "1".into();
    }
    if is_cyclic(g) {
        return format!("C{n}");
    }
    if n <= CATALOG_LOOKUP {
        if let Some(h) = catalog().iter().find(|h| h.order() == n && are_isomorphic(g, h).is_some()) {
            return h.name().to_string();
        }
    }
    format!("G{n}")
}

/// The group's own name unless it is a derived name (quotient or subgroup).
pub fn display_name(g: &GroupRef) -> String {
    let name = g.name();
    if name.contains('/') || name.contains('<') {
        structural_name(g)
    } else {
        name.to_string()
    }
}

fn dedupe(names: Vec<String>) -> Vec<String> {
    let mut count: HashMap<&str, usize> = HashMap::new();
    for n in &names {
        *count.entry(n).or_default() += 1;
    }
    let mut seen: HashMap<String, usize> = HashMap::new();
    names
        .iter()
        .map(|n| {
            if count[n.as_str()] == 1 {
                return n.clone();
            }
            let k = seen.entry(n.clone()).or_default();
            *k += 1;
            format!("{n}#{k}")
        })
        .collect()
}

static SUBGROUP_LABELS: Lazy<GroupMemo<Vec<String>>> = Lazy::new(GroupMemo::default);
static SLICE_LABELS: Lazy<GroupMemo<Vec<String>>> = Lazy::new(GroupMemo::default);

/// Name of the subgroup at index `h` of `g`, from its isomorphism type.
pub fn subgroup_name(g: &GroupRef, h: usize) -> String {
    let lat = g.lattice();
    if h == lat.full() {
        return display_name(g);
    }
    let (sub, _) = subgroup_group(g, lat.subgroup(h).bits()).expect("lattice member is a subgroup");
    structural_name(&sub)
}

/// One label per subgroup class; repeated isomorphism types get `#k` suffixes.
pub fn class_labels(g: &GroupRef) -> Arc<Vec<String>> {
    SUBGROUP_LABELS.get_or_init(g, || {
        let lat = g.lattice();
        dedupe(lat.classes().iter().map(|c| subgroup_name(g, c.rep)).collect())
    })
}

/// One label `(T,S)` per slice class, built from the subgroup class labels.
pub fn slice_labels(g: &GroupRef) -> Arc<Vec<String>> {
    SLICE_LABELS.get_or_init(g, || {
        let lat = g.lattice();
        let cl = class_labels(g);
        dedupe(
            g.slice_classes()
                .classes()
                .iter()
                .map(|c| format!("({},{})", cl[lat.class_of(c.t)], cl[lat.class_of(c.s)]))
                .collect(),
        )
    })
}
