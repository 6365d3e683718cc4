//! Isomorphism invariants read off central quotients and centralizer sizes.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{budget_check, Error, Result};
use crate::ff::{projective_count, projective_points, Prime, Subspace};
use crate::structure::CommutatorStructure;

/// Default cap on the number of projective points of `V` visited by point-wise invariants.
pub const POINT_CAP: u128 = 50_000_000;

/// `G/<z>` is `Z_p^abelian_rank x E_{2n+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuotientType {
    pub n: usize,
    pub abelian_rank: usize,
}

/// `counts[n - 1]` central quotients contain `E_{2n+1}`; `zero` counts elementary abelian quotients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FrequencyVector {
    pub counts: Vec<usize>,
    pub zero: usize,
}

impl FrequencyVector {
    pub fn total(&self) -> usize {
        self.zero + self.counts.iter().sum::<usize>()
    }
}

impl fmt::Display for FrequencyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Number of projective points of `V` per rank of `u -> [v, u]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RankSignature(pub BTreeMap<usize, u128>);

impl fmt::Display for RankSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(r, c)| format!("{r}:{c}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SmallCentralizer {
    pub is_subspace: bool,
    pub is_commuting: bool,
    /// projective points with centralizer of index at most p
    pub points: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PreimageEntry {
    pub line: Vec<u8>,
    pub n: usize,
    pub abelian: bool,
}

/// One normalized representative per 1-dimensional subspace of `GF(p)^r`; for
/// `r = 2` the order is `(1,0), (1,1), ..., (1,p-1), (0,1)`.
pub fn central_lines(p: Prime, r: usize) -> Vec<Vec<u8>> {
    projective_points(p, r).collect()
}

fn require_r2(cs: &CommutatorStructure) -> Result<()> {
    if cs.r() != 2 {
        return Err(Error::WrongDerivedRank {
            expected: 2,
            found: cs.r(),
        });
    }
    Ok(())
}

/// `G/<z>` with `W/<z>` coordinatized by a basis of the annihilator of `z`.
pub fn quotient_structure(cs: &CommutatorStructure, z: &[u8]) -> Result<CommutatorStructure> {
    if z.len() != cs.r() {
        return Err(Error::DimensionMismatch(format!("line has {} coordinates, W has {}", z.len(), cs.r())));
    }
    let line = Subspace::span(cs.p(), cs.r(), &[z]);
    if line.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(cs.map_derived(&line.annihilator().as_matrix()))
}

/// For `z = (z1, z2)` the functional `(-z2, z1)` spans the annihilator of `<z>`.
fn annihilating_functional(p: Prime, z: &[u8]) -> Vec<u8> {
    vec![p.neg(z[1] % p.get()), z[0] % p.get()]
}

pub fn quotient_type(cs: &CommutatorStructure, z: &[u8]) -> Result<QuotientType> {
    require_r2(cs)?;
    if z.len() != 2 {
        return Err(Error::DimensionMismatch("a line of W needs 2 coordinates".into()));
    }
    let phi = annihilating_functional(cs.p(), z);
    if phi.iter().all(|&c| c == 0) {
        return Err(Error::ZeroVector);
    }
    let n = cs.pencil_member(&phi).rank() / 2;
    Ok(QuotientType {
        n,
        abelian_rank: cs.d() - 2 * n,
    })
}

fn tally(d: usize, ns: impl Iterator<Item = usize>) -> FrequencyVector {
    let mut fv = FrequencyVector {
        counts: vec![0; d / 2],
        zero: 0,
    };
    for n in ns {
        if n == 0 {
            fv.zero += 1;
        } else {
            fv.counts[n - 1] += 1;
        }
    }
    fv
}

pub fn frequency_vector(cs: &CommutatorStructure) -> Result<FrequencyVector> {
    require_r2(cs)?;
    let ns = central_lines(cs.p(), 2)
        .into_iter()
        .map(|z| quotient_type(cs, &z).expect("nonzero line").n);
    Ok(tally(cs.d(), ns))
}

/// Same tally, computed from the quotient structures themselves.
pub fn frequency_vector_by_quotients(cs: &CommutatorStructure) -> Result<FrequencyVector> {
    require_r2(cs)?;
    let ns = central_lines(cs.p(), 2)
        .into_iter()
        .map(|z| quotient_structure(cs, &z).expect("nonzero line").form(0).rank() / 2);
    Ok(tally(cs.d(), ns))
}

fn for_each_point(cs: &CommutatorStructure, cap: u128, mut visit: impl FnMut(&[u8], usize)) -> Result<()> {
    budget_check("projective points of V", projective_count(cs.p(), cs.d()), cap)?;
    for v in projective_points(cs.p(), cs.d()) {
        let rank = cs.adjoint(&v).rank();
        visit(&v, rank);
    }
    Ok(())
}

pub fn rank_signature(cs: &CommutatorStructure) -> Result<RankSignature> {
    rank_signature_capped(cs, POINT_CAP)
}

pub fn rank_signature_capped(cs: &CommutatorStructure, cap: u128) -> Result<RankSignature> {
    let mut counts = BTreeMap::new();
    for_each_point(cs, cap, |_, rank| *counts.entry(rank).or_insert(0u128) += 1)?;
    Ok(RankSignature(counts))
}

/// Properties of `U`, the points whose centralizer has index at most `p`.
pub fn small_centralizer_properties(cs: &CommutatorStructure) -> Result<SmallCentralizer> {
    small_centralizer_properties_capped(cs, POINT_CAP)
}

pub fn small_centralizer_properties_capped(cs: &CommutatorStructure, cap: u128) -> Result<SmallCentralizer> {
    let p = cs.p();
    let mut points = 0u128;
    // members of U that are independent, so their span is the span of U
    let mut independent: Vec<Vec<u8>> = Vec::new();
    let mut span = Subspace::zero(p, cs.d());
    for_each_point(cs, cap, |v, rank| {
        if rank <= 1 {
            points += 1;
            if !span.contains(v) {
                independent.push(v.to_vec());
                span = Subspace::span(p, cs.d(), &independent);
            }
        }
    })?;
    let is_subspace = span.point_count() == points;
    // U commutes pairwise iff its span is totally isotropic
    let is_commuting = independent
        .iter()
        .enumerate()
        .all(|(i, u)| independent[i + 1..].iter().all(|v| cs.commutator(u, v).iter().all(|&e| e == 0)));
    Ok(SmallCentralizer {
        is_subspace,
        is_commuting,
        points,
    })
}

/// For each central line `z`: the half-rank of `G/<z>` and whether the preimage of
/// its center (the radical of the projected form) is abelian in `G` itself.
pub fn center_preimage_profile(cs: &CommutatorStructure) -> Result<Vec<PreimageEntry>> {
    require_r2(cs)?;
    Ok(central_lines(cs.p(), 2)
        .into_iter()
        .map(|z| {
            let q = quotient_structure(cs, &z).expect("nonzero line");
            let u = q.radical();
            let abelian = cs.restrict(u.basis()).forms().iter().all(|f| f.is_zero());
            PreimageEntry {
                n: q.form(0).rank() / 2,
                line: z,
                abelian,
            }
        })
        .collect())
}

/// The profile as a sorted multiset of `(n, abelian)`, independent of the line basis.
pub fn preimage_multiset(profile: &[PreimageEntry]) -> Vec<(usize, bool)> {
    let mut out: Vec<(usize, bool)> = profile.iter().map(|e| (e.n, e.abelian)).collect();
    out.sort();
    out
}
