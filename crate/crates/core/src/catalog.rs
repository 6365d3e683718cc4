//! The special groups of exponent p with `|G'| = p^2` and order dividing `p^9`,
//! plus the extraspecial `E_3`, as Scharlau pairs.

use crate::digraph::FlowDigraph;
use crate::error::{Error, Result};
use crate::ff::{FpMatrix, Prime};
use crate::structure::{CommutatorStructure, ScharlauPair};

/// How a factor's derived group sits inside the shared `GF(p)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Glue {
    /// rank-one factor glued onto the line spanned by `(a, b)`
    Line(i64, i64),
    /// rank-two factor glued by the identity
    Identity,
}

#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub order_exponent: u32,
    pub gens: usize,
    pub derived_rank: usize,
    /// tabulated central factors; `None` for indecomposable groups
    pub factors: Option<&'static [&'static str]>,
    /// central-quotient frequencies as `constant + slope * p`, one pair per half-rank
    pub frequency: &'static [(i64, i64)],
    /// factors and gluing that rebuild the group as a central product
    pub recipe: &'static [(&'static str, Glue)],
}

impl CatalogEntry {
    pub fn is_indecomposable(&self) -> bool {
        self.factors.is_none()
    }

    pub fn expected_frequency(&self, p: Prime) -> Vec<usize> {
        let q = p.value() as i64;
        self.frequency.iter().map(|&(c, s)| (c + s * q) as usize).collect()
    }
}

use Glue::{Identity as I, Line as L};

const fn entry(
    name: &'static str,
    order_exponent: u32,
    factors: Option<&'static [&'static str]>,
    frequency: &'static [(i64, i64)],
    recipe: &'static [(&'static str, Glue)],
) -> CatalogEntry {
    CatalogEntry {
        name,
        order_exponent,
        gens: order_exponent as usize - 2,
        derived_rank: 2,
        factors,
        frequency,
        recipe,
    }
}

pub const E3: &str = "3.2.1";

pub static ENTRIES: [CatalogEntry; 21] = [
    CatalogEntry {
        name: E3,
        order_exponent: 3,
        gens: 2,
        derived_rank: 1,
        factors: None,
        frequency: &[],
        recipe: &[],
    },
    entry("5.3.1", 5, None, &[(1, 1)], &[]),
    entry("6.4.2", 6, Some(&[E3, E3]), &[(2, 0), (-1, 1)], &[(E3, L(1, 0)), (E3, L(0, 1))]),
    entry("6.4.3", 6, None, &[(1, 0), (0, 1)], &[]),
    entry("6.4.4", 6, None, &[(0, 0), (1, 1)], &[]),
    entry("7.5.5", 7, Some(&[E3, "5.3.1"]), &[(1, 0), (0, 1)], &[("5.3.1", I), (E3, L(1, 0))]),
    entry("7.5.6", 7, None, &[(0, 0), (1, 1)], &[]),
    entry(
        "8.6.7",
        8,
        Some(&[E3, E3, E3]),
        &[(1, 0), (1, 0), (-1, 1)],
        &[(E3, L(1, 0)), (E3, L(1, 0)), (E3, L(0, 1))],
    ),
    entry(
        "8.6.8",
        8,
        Some(&[E3, E3, E3]),
        &[(0, 0), (3, 0), (-2, 1)],
        &[(E3, L(1, 0)), (E3, L(1, 1)), (E3, L(0, 1))],
    ),
    entry("8.6.9", 8, Some(&[E3, "6.4.3"]), &[(0, 0), (2, 0), (-1, 1)], &[("6.4.3", I), (E3, L(1, 1))]),
    entry("8.6.10", 8, Some(&[E3, "6.4.3"]), &[(1, 0), (0, 0), (0, 1)], &[("6.4.3", I), (E3, L(1, 0))]),
    entry("8.6.11", 8, Some(&[E3, "6.4.4"]), &[(0, 0), (1, 0), (0, 1)], &[("6.4.4", I), (E3, L(1, 0))]),
    entry("8.6.12", 8, Some(&["5.3.1", "5.3.1"]), &[(0, 0), (1, 1), (0, 0)], &[("5.3.1", I), ("5.3.1", I)]),
    entry("8.6.13", 8, None, &[(0, 0), (1, 0), (0, 1)], &[]),
    entry("8.6.14", 8, None, &[(0, 0), (0, 0), (1, 1)], &[]),
    entry("A", 9, Some(&[E3, "7.5.6"]), &[(0, 0), (1, 0), (0, 1)], &[("7.5.6", I), (E3, L(1, 0))]),
    entry(
        "B",
        9,
        Some(&[E3, E3, "5.3.1"]),
        &[(1, 0), (0, 0), (0, 1)],
        &[(E3, L(1, 0)), (E3, L(1, 0)), ("5.3.1", I)],
    ),
    entry(
        "C",
        9,
        Some(&[E3, E3, "5.3.1"]),
        &[(0, 0), (2, 0), (-1, 1)],
        &[(E3, L(1, 0)), (E3, L(0, 1)), ("5.3.1", I)],
    ),
    entry("D", 9, Some(&["5.3.1", "6.4.4"]), &[(0, 0), (0, 0), (1, 1)], &[("5.3.1", I), ("6.4.4", I)]),
    entry("E", 9, Some(&["5.3.1", "6.4.3"]), &[(0, 0), (1, 0), (0, 1)], &[("6.4.3", I), ("5.3.1", I)]),
    entry("F", 9, None, &[(0, 0), (0, 0), (1, 1)], &[]),
];

/// Indecomposable entries, the only possible central factors up to order `p^9`.
pub const INDECOMPOSABLE: [&str; 8] = [E3, "5.3.1", "6.4.3", "6.4.4", "7.5.6", "8.6.13", "8.6.14", "F"];

pub fn entries() -> &'static [CatalogEntry] {
    &ENTRIES
}

/// Entries with derived rank two.
pub fn rank_two_entries() -> impl Iterator<Item = &'static CatalogEntry> {
    ENTRIES.iter().filter(|e| e.derived_rank == 2)
}

fn canonical_name(name: &str) -> &str {
    match name {
        "E3" | "E_3" => E3,
        other => other,
    }
}

pub fn lookup(name: &str) -> Result<&'static CatalogEntry> {
    let name = canonical_name(name);
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownName(name.to_string()))
}

/// `(a, b, c)` with `x^3 - a x^2 - b x - c` rootless mod p, in lexicographic order.
pub fn irreducible_cubics(p: Prime) -> Vec<(u8, u8, u8)> {
    let q = p.get();
    let mut out = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                if !cubic_has_root(p, (a, b, c)) {
                    out.push((a, b, c));
                }
            }
        }
    }
    out
}

fn cubic_has_root(p: Prime, (a, b, c): (u8, u8, u8)) -> bool {
    (0..p.get()).any(|x| {
        let x2 = p.mul(x, x);
        let lower = p.add(p.add(p.mul(a, x2), p.mul(b, x)), c);
        p.mul(x2, x) == lower
    })
}

/// The free parameters of the tables: a quadratic nonresidue and an irreducible cubic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Params {
    pub nu: u8,
    pub cubic: (u8, u8, u8),
}

impl Params {
    /// Least nonresidue and lexicographically least irreducible cubic.
    pub fn canonical(p: Prime) -> Params {
        Params {
            nu: p.least_nonresidue(),
            cubic: irreducible_cubics(p)[0],
        }
    }

    pub fn is_valid(&self, p: Prime) -> bool {
        p.pow(self.nu, (p.value() as u64 - 1) / 2) == p.get() - 1 && !cubic_has_root(p, self.cubic)
    }
}

fn rows<const N: usize>(m: &[[i64; N]]) -> Vec<Vec<i64>> {
    m.iter().map(|r| r.to_vec()).collect()
}

/// The Scharlau pair as tabulated; `None` for `E_3`.
pub fn scharlau(name: &str, p: Prime, params: &Params) -> Result<Option<ScharlauPair>> {
    let name = lookup(name)?.name;
    let nu = params.nu as i64;
    let (a, b, c) = (params.cubic.0 as i64, params.cubic.1 as i64, params.cubic.2 as i64);
    let i3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let i34 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]];
    let (ma, mb) = match name {
        E3 => return Ok(None),
        "5.3.1" => (rows(&[[1, 0]]), rows(&[[0, 1]])),
        "6.4.2" => (rows(&[[1, 0], [0, 0]]), rows(&[[0, 0], [0, 1]])),
        "6.4.3" => (rows(&[[1, 0], [0, 1]]), rows(&[[0, 1], [0, 0]])),
        "6.4.4" => (rows(&[[1, 0], [0, 1]]), rows(&[[0, 1], [nu, 0]])),
        "7.5.5" => (rows(&[[1, 0, 0], [0, 0, 1]]), rows(&[[0, 1, 0], [0, 0, 0]])),
        "7.5.6" => (rows(&[[1, 0, 0], [0, 1, 0]]), rows(&[[0, 1, 0], [0, 0, 1]])),
        "8.6.7" => (rows(&[[1, 0, 0], [0, 1, 0], [0, 0, 0]]), rows(&[[0, 0, 0], [0, 0, 0], [0, 0, 1]])),
        "8.6.8" => (rows(&[[1, 0, 0], [0, 1, 0], [0, 0, 0]]), rows(&[[0, 0, 0], [0, 1, 0], [0, 0, 1]])),
        "8.6.9" => (rows(&i3), rows(&[[0, 1, 0], [0, 0, 0], [0, 0, 1]])),
        // A(3,3) = 1: the printed A = diag(1,1,0) leaves x3 and y3 central
        "8.6.10" => (rows(&i3), rows(&[[0, 1, 0], [0, 0, 0], [0, 0, 0]])),
        "8.6.11" => (rows(&i3), rows(&[[0, 1, 0], [nu, 0, 0], [0, 0, 0]])),
        "8.6.12" => (rows(&[[1, 0, 0], [0, 0, 1], [0, 0, 0]]), rows(&[[0, 1, 0], [0, 0, 0], [0, 0, 1]])),
        "8.6.13" => (rows(&i3), rows(&[[0, 1, 0], [0, 0, 1], [0, 0, 0]])),
        "8.6.14" => (rows(&i3), rows(&[[0, 1, 0], [0, 0, 1], [c, b, a]])),
        "A" => (rows(&i34), rows(&[[0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])),
        "B" => (rows(&i34), rows(&[[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1]])),
        "C" => (
            rows(&[[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0]]),
            rows(&[[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]]),
        ),
        "D" => (
            rows(&[[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
            rows(&[[0, 1, 0, 0], [0, 0, 0, 1], [0, 0, nu, 0]]),
        ),
        "E" => (rows(&i34), rows(&[[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1]])),
        "F" => (rows(&i34), rows(&[[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])),
        other => unreachable!("catalog entry {other} without matrices"),
    };
    ScharlauPair::from_rows(p, &ma, &mb).map(Some)
}

/// 8.6.10 with the Scharlau matrix A exactly as tabulated.
pub fn printed_8610(p: Prime) -> CommutatorStructure {
    let pair = ScharlauPair::from_rows(p, &[[1, 0, 0], [0, 1, 0], [0, 0, 0]], &[[0, 1, 0], [0, 0, 0], [0, 0, 0]])
        .expect("3x3 pair");
    CommutatorStructure::from_scharlau(&pair)
}

pub fn build(name: &str, p: Prime) -> Result<CommutatorStructure> {
    build_with(name, p, &Params::canonical(p))
}

pub fn build_with(name: &str, p: Prime, params: &Params) -> Result<CommutatorStructure> {
    debug_assert!(params.is_valid(p));
    match scharlau(name, p, params)? {
        Some(pair) => Ok(CommutatorStructure::from_scharlau(&pair)),
        None => Ok(CommutatorStructure::from_upper(p, 2, 1, |_, _| vec![1])),
    }
}

/// The digraphs drawn for the groups of order `p^9`, for the order-`p^5` example,
/// and for `E_5`. Their generator labelling differs from the Scharlau ordering.
pub fn drawn_digraph(name: &str, p: Prime) -> Option<FlowDigraph> {
    let nu = p.least_nonresidue() as i64;
    let (r, d, edges): (usize, usize, Vec<(usize, usize, [i64; 2])>) = match name {
        "E5" => (1, 4, vec![(1, 2, [1, 0]), (3, 4, [1, 0])]),
        "5.3.1" => (2, 3, vec![(1, 2, [1, 0]), (2, 3, [0, 1])]),
        "A" => (2, 7, vec![(1, 2, [1, 0]), (2, 3, [0, 1]), (3, 4, [1, 0]), (4, 5, [0, 1]), (6, 7, [1, 0])]),
        "B" => (2, 7, vec![(1, 2, [1, 0]), (2, 3, [0, 1]), (4, 5, [1, 0]), (6, 7, [1, 0])]),
        "C" => (2, 7, vec![(1, 2, [1, 0]), (2, 3, [0, 1]), (4, 5, [1, 0]), (6, 7, [0, 1])]),
        "D" => (
            2,
            7,
            vec![
                (1, 2, [1, 0]),
                (1, 3, [0, 1]),
                (3, 4, [nu, 0]),
                (2, 4, [0, 1]),
                (5, 6, [1, 0]),
                (6, 7, [0, 1]),
            ],
        ),
        "E" => (2, 7, vec![(1, 2, [1, 0]), (2, 3, [0, 1]), (3, 4, [1, 0]), (5, 6, [1, 0]), (6, 7, [0, 1])]),
        "F" => (
            2,
            7,
            vec![
                (1, 2, [1, 0]),
                (2, 3, [0, 1]),
                (3, 4, [1, 0]),
                (4, 5, [0, 1]),
                (5, 6, [1, 0]),
                (6, 7, [0, 1]),
            ],
        ),
        _ => return None,
    };
    let mut g = FlowDigraph::new(name, p, r, d);
    for (i, j, flow) in edges {
        g.add_edge(i, j, &flow[..r]).expect("well-formed drawing");
    }
    Some(g)
}

/// Signed permutation carrying the Scharlau build of A to its drawn digraph:
/// `change_of_basis(build("A"), s, I)` equals `from_digraph(drawn_digraph("A"))`.
pub fn drawn_a_relabeling(p: Prime) -> FpMatrix {
    // new generator k is sign * old generator, old order x1 x2 x3 y1 y2 y3 y4
    let cols: [(usize, i64); 7] = [(4, -1), (1, 1), (5, 1), (2, -1), (6, -1), (0, 1), (3, 1)];
    let mut s = FpMatrix::zeros(p, 7, 7);
    for (k, &(old, sign)) in cols.iter().enumerate() {
        s.set(old, k, sign);
    }
    s
}
