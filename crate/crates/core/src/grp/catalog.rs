//! Built-in group names and the bundled catalog.
//!
//! Names: `1`, `C<n>`, `D<2n>` (dihedral of order 2n), `S<n>`, `A<n>`,
//! `Q<4n>` (dicyclic, so `Q8` is the quaternion group), `V4`, and products
//! joined with `x` such as `C2xC4`.

use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use super::{direct_product, Group, GroupRef};
use crate::error::{validation, Error, Result};

/// A user-supplied group: 0-based image arrays of permutation generators.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupRecord {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
}

impl GroupRecord {
    pub fn build(&self) -> Result<GroupRef> {
        Group::from_permutations(&self.name, self.degree, &self.generators)
    }
}

/// One name per line; `#` starts a comment.
const CATALOG_NAMES: &str = include_str!("../../data/catalog.txt");

/// Names listed in the bundled catalog file.
pub fn catalog_names() -> impl Iterator<Item = &'static str> {
    CATALOG_NAMES.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

static CATALOG: Lazy<Vec<GroupRef>> = Lazy::new(|| {
    let mut groups: Vec<GroupRef> = catalog_names()
        .map(|n| parse_group_spec(n).expect("catalog names parse"))
        .collect();
    groups.sort_by_key(|g| g.order());
    groups
});

/// The bundled catalog, sorted by order (stable within an order).
pub fn catalog() -> &'static [GroupRef] {
    &CATALOG
}

pub fn catalog_up_to(max_order: usize) -> Vec<GroupRef> {
    catalog().iter().filter(|g| g.order() <= max_order).cloned().collect()
}

fn cycle(n: usize) -> Vec<usize> {
    (0..n).map(|i| (i + 1) % n).collect()
}

fn transposition(n: usize, a: usize, b: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.swap(a, b);
    p
}

fn three_cycle(n: usize, a: usize, b: usize, c: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p[a] = b;
    p[b] = c;
    p[c] = a;
    p
}

fn build(name: &str, degree: usize, gens: Vec<Vec<usize>>) -> Result<GroupRef> {
    Group::from_permutations(name, degree, &gens)
}

fn parse_factor(spec: &str) -> Result<GroupRef> {
    let bad = || Error::Validation(format!("unknown group name {spec:?}"));
    if spec == "1" {
        return Ok(Group::trivial());
    }
    if spec == "V4" {
        return build("V4", 4, vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]]);
    }
    if spec.len() < 2 || !spec.is_char_boundary(1) {
        return Err(bad());
    }
    let (head, digits) = spec.split_at(1);
    let n: usize = digits.parse().map_err(|_| bad())?;
    match head {
        "C" if n >= 1 => {
            if n == 1 {
                return Ok(Group::trivial());
            }
            build(spec, n, vec![cycle(n)])
        }
        "D" if n >= 2 && n.is_multiple_of(2) => {
            let m = n / 2;
            match m {
                1 => build(spec, 2, vec![cycle(2)]),
                2 => build(spec, 4, vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]]),
                _ => {
                    let reflection = (0..m).map(|i| (m - i) % m).collect();
                    build(spec, m, vec![cycle(m), reflection])
                }
            }
        }
        "S" if n >= 1 => match n {
            1 => Ok(Group::trivial()),
            2 => build(spec, 2, vec![cycle(2)]),
            _ => build(spec, n, vec![cycle(n), transposition(n, 0, 1)]),
        },
        "A" if n >= 1 => {
            if n < 3 {
                return Ok(Group::trivial());
            }
            let gens = (2..n).map(|k| three_cycle(n, 0, 1, k)).collect();
            build(spec, n, gens)
        }
        "Q" if n >= 4 && n.is_multiple_of(4) => dicyclic(spec, n / 4),
        _ => Err(bad()),
    }
}

/// Dicyclic group of order 4m, `<a, x | a^{2m}, x² = a^m, x a x⁻¹ = a⁻¹>`,
/// realised by its left regular representation on pairs `a^i x^j`.
fn dicyclic(name: &str, m: usize) -> Result<GroupRef> {
    let r = 2 * m;
    let order = 2 * r;
    let encode = |i: usize, j: usize| j * r + i;
    // (a^i x^j)(a^k x^l)
    let mul = |i: usize, j: usize, k: usize, l: usize| -> usize {
        if j == 0 {
            encode((i + k) % r, l)
        } else {
            // x a^k = a^{-k} x
            let i2 = (i + r - k % r) % r;
            if l == 0 {
                encode(i2, 1)
            } else {
                // x x = a^m
                encode((i2 + m) % r, 0)
            }
        }
    };
    let left = |i: usize, j: usize| -> Vec<usize> { (0..order).map(|p| mul(i, j, p % r, p / r)).collect() };
    build(name, order, vec![left(1, 0), left(0, 1)])
}

/// Parses a group name, including `x`-joined direct products.
pub fn parse_group_spec(spec: &str) -> Result<GroupRef> {
    let spec = spec.trim();
    if spec.is_empty() {
        return validation("empty group name");
    }
    let factors: Vec<&str> = spec.split('x').collect();
    let mut acc = parse_factor(factors[0])?;
    for f in &factors[1..] {
        let next = parse_factor(f)?;
        acc = direct_product(&acc, &next)?.group;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_orders() {
        for (name, order) in [
            ("1", 1),
            ("C1", 1),
            ("C6", 6),
            ("D8", 8),
            ("D2", 2),
            ("D4", 4),
            ("S4", 24),
            ("A4", 12),
            ("A5", 60),
            ("Q8", 8),
            ("Q12", 12),
            ("V4", 4),
            ("C2xC4", 8),
            ("C2xC2xC2", 8),
        ] {
            let g = parse_group_spec(name).unwrap();
            assert_eq!(g.order(), order, "{name}");
            g.verify_axioms().unwrap();
        }
    }

    #[test]
    fn quaternion_has_one_involution() {
        let q8 = parse_group_spec("Q8").unwrap();
        assert_eq!(q8.element_orders().iter().filter(|&&o| o == 2).count(), 1);
        assert!(!q8.is_abelian());
    }

    #[test]
    fn unknown_names() {
        for bad in ["", "Z5", "D7", "Cx", "C2xx"] {
            assert!(parse_group_spec(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn catalog_shape() {
        let cat = catalog();
        assert!(cat.len() >= 20);
        assert!(cat.windows(2).all(|w| w[0].order() <= w[1].order()));
        for n in 1..=16 {
            assert!(cat.iter().any(|g| g.name() == format!("C{n}") || (n == 1 && g.name() == "1")));
        }
    }

    #[test]
    fn record_round_trip() {
        let rec: GroupRecord = serde_json::from_str(r#"{"name":"S3","degree":3,"generators":[[1,2,0],[1,0,2]]}"#).unwrap();
        assert_eq!(rec.build().unwrap().order(), 6);
    }
}
