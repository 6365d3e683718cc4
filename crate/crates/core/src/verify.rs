//! Mechanical checks of the catalog tables and of the uniqueness argument for group A.
//!
//! Failures are reported, never thrown; each report serializes for the CLI.

use serde::Serialize;

use crate::catalog::{self, rank_two_entries, ENTRIES};
use crate::central_products::{factor_multiset, find_central_decomposition, DecompositionOutcome};
use crate::digraph::FlowDigraph;
use crate::error::{Error, Result};
use crate::ff::{FpMatrix, Prime};
use crate::invariants::frequency_vector;
use crate::isomorphism::{distinguish, Discriminator};
use crate::structure::CommutatorStructure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Fail dominates Unknown, which dominates Pass.
    pub fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        verdicts.into_iter().fold(Verdict::Pass, |acc, v| match (acc, v) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
            _ => Verdict::Pass,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Unknown => "unknown",
        }
    }
}

/// Budget exhaustion is the only error that maps to an unknown verdict.
fn verdict_of<T>(r: &Result<T>, ok: impl FnOnce(&T) -> bool) -> Verdict {
    match r {
        Ok(v) => Verdict::from_bool(ok(v)),
        Err(Error::BudgetExceeded { .. }) => Verdict::Unknown,
        Err(_) => Verdict::Fail,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FrequencyItem {
    pub name: String,
    pub computed: Vec<usize>,
    pub expected: Vec<usize>,
    pub verdict: Verdict,
}

/// The 8.6.10 Scharlau matrix A as tabulated, which the catalog corrects.
#[derive(Debug, Clone, Serialize)]
pub struct PrintedMatrixFinding {
    pub name: String,
    pub special: bool,
    pub central_generators: usize,
    pub computed: Vec<usize>,
    pub tabulated: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrequencyReport {
    pub p: u32,
    pub items: Vec<FrequencyItem>,
    pub findings: Vec<PrintedMatrixFinding>,
    pub verdict: Verdict,
}

pub fn verify_frequencies(p: Prime) -> FrequencyReport {
    let items: Vec<FrequencyItem> = rank_two_entries()
        .map(|e| {
            let cs = catalog::build(e.name, p).expect("catalog name");
            let computed = frequency_vector(&cs).expect("rank two").counts;
            let expected = e.expected_frequency(p);
            FrequencyItem {
                name: e.name.to_string(),
                verdict: Verdict::from_bool(computed == expected),
                computed,
                expected,
            }
        })
        .collect();
    let printed = catalog::printed_8610(p);
    let findings = vec![PrintedMatrixFinding {
        name: "8.6.10 (printed A)".into(),
        special: printed.is_special(),
        central_generators: printed.radical().dim(),
        computed: frequency_vector(&printed).expect("rank two").counts,
        tabulated: catalog::lookup("8.6.10").expect("catalog name").expected_frequency(p),
    }];
    FrequencyReport {
        p: p.value(),
        verdict: Verdict::combine(items.iter().map(|i| i.verdict)),
        items,
        findings,
    }
}

/// The invariant the tables rely on to separate two entries of the same order.
pub fn expected_discriminator(a: &str, b: &str, p: Prime) -> Option<Discriminator> {
    let (ea, eb) = (catalog::lookup(a).ok()?, catalog::lookup(b).ok()?);
    if (ea.gens, ea.derived_rank) != (eb.gens, eb.derived_rank) {
        return Some(Discriminator::Shape);
    }
    if ea.expected_frequency(p) != eb.expected_frequency(p) {
        return Some(Discriminator::Frequency);
    }
    let mut pair = [ea.name, eb.name];
    pair.sort_unstable();
    match pair {
        ["8.6.11", "8.6.13"] => Some(Discriminator::SmallCentralizerCommuting),
        ["D", "F"] => Some(Discriminator::SmallCentralizerSubspace),
        ["A", "E"] => Some(Discriminator::AbelianPreimage),
        _ => None,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DistinctItem {
    pub first: String,
    pub second: String,
    pub discriminators: Vec<Discriminator>,
    pub expected: Option<Discriminator>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistinctReport {
    pub p: u32,
    pub items: Vec<DistinctItem>,
    pub verdict: Verdict,
}

/// Every pair of catalog entries, with the invariants that separate them.
pub fn verify_pairwise_distinct(p: Prime) -> DistinctReport {
    let builds: Vec<(&str, CommutatorStructure)> = ENTRIES
        .iter()
        .map(|e| (e.name, catalog::build(e.name, p).expect("catalog name")))
        .collect();
    let mut items = Vec::new();
    for (i, (a, ca)) in builds.iter().enumerate() {
        for (b, cb) in &builds[i + 1..] {
            let discriminators = distinguish(ca, cb).discriminators().to_vec();
            let expected = expected_discriminator(a, b, p);
            let ok = expected.is_some_and(|d| discriminators.contains(&d));
            items.push(DistinctItem {
                first: a.to_string(),
                second: b.to_string(),
                discriminators,
                expected,
                verdict: Verdict::from_bool(ok),
            });
        }
    }
    DistinctReport {
        p: p.value(),
        verdict: Verdict::combine(items.iter().map(|i| i.verdict)),
        items,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub flow: Vec<u8>,
}

fn edge_list(g: &FlowDigraph) -> Vec<Edge> {
    g.edges()
        .map(|(from, to, flow)| Edge {
            from,
            to,
            flow: flow.to_vec(),
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ReplayStep {
    pub index: usize,
    pub description: String,
    pub expected: Vec<Edge>,
    pub computed: Vec<Edge>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReplayReport {
    pub p: u32,
    pub steps: Vec<ReplayStep>,
    /// the last digraph, relabelled, equals the Scharlau build of A
    pub equals_group_a: bool,
    /// index of the first step whose digraph differs from the drawing
    pub failing_step: Option<usize>,
    pub verdict: Verdict,
}

type Picture = &'static [(usize, usize, [i64; 2])];

/// A change of variables with the digraph drawn after it.
struct Substitution {
    description: &'static str,
    /// `(new generator, [(old generator, exponent)])`; other generators are unchanged
    generators: &'static [(usize, &'static [(usize, i64)])],
    /// new coordinates of the old derived basis vectors; `None` keeps `z1, z2`
    derived: Option<[[i64; 2]; 2]>,
    picture: Picture,
}

/// 7.5.6 on `x1..x5` with `E_3` on `x6, x7` glued along `z1 z2`.
const START: Picture = &[(1, 2, [1, 0]), (2, 3, [0, 1]), (3, 4, [1, 0]), (4, 5, [0, 1]), (6, 7, [1, 1])];

const CHAIN: [Substitution; 4] = [
    Substitution {
        description: "x3' = x3 x1^-1 x5^-1, z1' = z1 z2",
        generators: &[(3, &[(3, 1), (1, -1), (5, -1)])],
        // z1 = z1' z2^-1
        derived: Some([[1, 0], [-1, 1]]),
        picture: &[(1, 2, [1, -1]), (2, 3, [1, 0]), (3, 4, [1, 0]), (4, 5, [0, 1]), (6, 7, [1, 0])],
    },
    Substitution {
        description: "x4' = x4 x2",
        generators: &[(4, &[(4, 1), (2, 1)])],
        derived: None,
        picture: &[(1, 2, [1, -1]), (1, 4, [1, -1]), (2, 3, [1, 0]), (4, 5, [0, 1]), (6, 7, [1, 0])],
    },
    Substitution {
        description: "x1' = x1 x3 x5^-1, x3' = x3^-1",
        generators: &[(1, &[(1, 1), (3, 1), (5, -1)]), (3, &[(3, -1)])],
        derived: None,
        // drawn as x3 -> x2 -> x1 -> x4 -> x5 and x6 -> x7
        picture: &[(1, 2, [0, -1]), (1, 4, [1, 0]), (2, 3, [-1, 0]), (4, 5, [0, 1]), (6, 7, [1, 0])],
    },
    Substitution {
        description: "interchange x1 and x3",
        generators: &[(1, &[(3, 1)]), (3, &[(1, 1)])],
        derived: None,
        picture: &[(1, 2, [1, 0]), (2, 3, [0, 1]), (3, 4, [1, 0]), (4, 5, [0, 1]), (6, 7, [1, 0])],
    },
];

fn picture(p: Prime, name: &str, edges: Picture) -> FlowDigraph {
    let mut g = FlowDigraph::new(name, p, 2, 7);
    for &(i, j, flow) in edges {
        g.add_edge(i, j, &flow).expect("well-formed picture");
    }
    g
}

impl Substitution {
    fn matrices(&self, p: Prime) -> (FpMatrix, FpMatrix) {
        let mut s = FpMatrix::identity(p, 7);
        for &(new, word) in self.generators {
            for i in 0..7 {
                s.set(i, new - 1, 0);
            }
            for &(old, e) in word {
                s.set(old - 1, new - 1, e);
            }
        }
        let t = match self.derived {
            Some(rows) => FpMatrix::from_rows(p, &rows).expect("2x2"),
            None => FpMatrix::identity(p, 2),
        };
        (s, t)
    }
}

/// Replays the substitutions carrying the `z1 z2`-glued product of 7.5.6 and `E_3` to group A.
pub fn replay_section5(p: Prime) -> ReplayReport {
    let mut current = CommutatorStructure::from_digraph(&picture(p, "start", START));
    let mut steps = vec![ReplayStep {
        index: 0,
        description: "7.5.6 with E_3 on z1 z2".into(),
        expected: edge_list(&picture(p, "start", START)),
        computed: edge_list(&current.to_digraph("start")),
        verdict: Verdict::Pass,
    }];
    steps[0].verdict = Verdict::from_bool(steps[0].expected == steps[0].computed);
    for (k, sub) in CHAIN.iter().enumerate() {
        let (s, t) = sub.matrices(p);
        current = current.change_of_basis(&s, &t).expect("invertible substitution");
        let expected = edge_list(&picture(p, sub.description, sub.picture));
        let computed = edge_list(&current.to_digraph(sub.description));
        steps.push(ReplayStep {
            index: k + 1,
            description: sub.description.into(),
            verdict: Verdict::from_bool(expected == computed),
            expected,
            computed,
        });
    }
    let relabel = catalog::drawn_a_relabeling(p).invert().expect("signed permutation");
    let back = current
        .change_of_basis(&relabel, &FpMatrix::identity(p, 2))
        .expect("invertible relabeling");
    let equals_group_a = back == catalog::build("A", p).expect("catalog name");
    let failing_step = steps.iter().find(|s| s.verdict != Verdict::Pass).map(|s| s.index);
    ReplayReport {
        p: p.value(),
        verdict: Verdict::from_bool(failing_step.is_none() && equals_group_a),
        steps,
        equals_group_a,
        failing_step,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionItem {
    pub name: String,
    /// part dimensions in decreasing order; a single part means indecomposable
    pub dimensions: Option<Vec<usize>>,
    pub expected_dimensions: Vec<usize>,
    pub factors: Option<Vec<String>>,
    pub expected_factors: Vec<String>,
    pub note: Option<String>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionReport {
    pub p: u32,
    pub items: Vec<PartitionItem>,
    pub verdict: Verdict,
}

/// Expected central-factor names of an entry, sorted; an indecomposable entry is its own factor.
pub fn expected_factors(name: &str) -> Result<Vec<String>> {
    let e = catalog::lookup(name)?;
    let mut out: Vec<String> = match e.factors {
        Some(fs) => fs.iter().map(|s| s.to_string()).collect(),
        None => vec![e.name.to_string()],
    };
    out.sort();
    Ok(out)
}

/// Decomposes each group of order `p^9` and names its central factors.
pub fn verify_partition_exhaustion(p: Prime) -> PartitionReport {
    let expected: [(&str, &[usize]); 6] = [
        ("A", &[5, 2]),
        ("B", &[3, 2, 2]),
        ("C", &[3, 2, 2]),
        ("D", &[4, 3]),
        ("E", &[4, 3]),
        ("F", &[7]),
    ];
    let items: Vec<PartitionItem> = expected
        .iter()
        .map(|&(name, dims)| {
            let cs = catalog::build(name, p).expect("catalog name");
            let decomposition = find_central_decomposition(&cs).map(|o| match o {
                DecompositionOutcome::Indecomposable => vec![cs.d()],
                d => d.dimensions(cs.d()),
            });
            let factors = factor_multiset(&cs);
            let expected_factors = expected_factors(name).expect("catalog name");
            let verdict = Verdict::combine([
                verdict_of(&decomposition, |d| d == dims),
                verdict_of(&factors, |f| *f == expected_factors),
            ]);
            let note = [decomposition.as_ref().err(), factors.as_ref().err()]
                .into_iter()
                .flatten()
                .map(|e| e.to_string())
                .next();
            PartitionItem {
                name: name.to_string(),
                dimensions: decomposition.ok(),
                expected_dimensions: dims.to_vec(),
                factors: factors.ok(),
                expected_factors,
                note,
                verdict,
            }
        })
        .collect();
    PartitionReport {
        p: p.value(),
        verdict: Verdict::combine(items.iter().map(|i| i.verdict)),
        items,
    }
}
