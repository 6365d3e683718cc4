//! Central products and central decompositions.
//!
//! A central decomposition splits `V` into independent subspaces that commute
//! with each other. Two searches are provided. The subspace search enumerates
//! candidate parts `V1` and tests their orthogonal complement. The algebraic
//! search uses the self-adjoint operators `J = {X : c(Xu, v) = c(u, Xv)}`:
//! decompositions are the nontrivial idempotents of `J`, and any element of `J`
//! splits `V` along the Fitting decomposition of a polynomial in it.

use serde::Serialize;

use crate::catalog::{self, INDECOMPOSABLE};
use crate::error::{budget_check, Error, Result};
use crate::ff::{for_each_subspace, subspace_count, FpMatrix, Prime, Subspace};
use crate::isomorphism::{distinguish, is_isomorphic, IsoOutcome, SearchBudget};
use crate::structure::CommutatorStructure;

/// Candidate subspaces the subspace search may visit.
pub const SUBSPACE_CAP: u128 = 10_000_000;

/// Embeds a factor's derived group into the shared one; full column rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingMap {
    matrix: FpMatrix,
}

impl GluingMap {
    pub fn new(matrix: FpMatrix) -> Result<GluingMap> {
        if matrix.rank() != matrix.cols() {
            return Err(Error::RankMismatch(format!(
                "gluing map {}x{} is not injective",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(GluingMap { matrix })
    }

    pub fn identity(p: Prime, r: usize) -> GluingMap {
        GluingMap {
            matrix: FpMatrix::identity(p, r),
        }
    }

    /// A rank-one factor sent onto the line spanned by `v`.
    pub fn line(p: Prime, v: &[i64]) -> Result<GluingMap> {
        let rows: Vec<Vec<i64>> = v.iter().map(|&x| vec![x]).collect();
        GluingMap::new(FpMatrix::from_rows(p, &rows)?)
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.matrix
    }

    pub fn source_rank(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_rank(&self) -> usize {
        self.matrix.rows()
    }
}

/// Block-diagonal structure; block `i` carries factor `i` pushed through `glue[i]`.
pub fn central_product(factors: &[CommutatorStructure], glue: &[GluingMap], target_rank: usize) -> Result<CommutatorStructure> {
    if factors.len() != glue.len() {
        return Err(Error::RankMismatch(format!("{} factors but {} gluing maps", factors.len(), glue.len())));
    }
    let Some(first) = factors.first() else {
        return Err(Error::DimensionMismatch("central product of no factors".into()));
    };
    let p = first.p();
    let mut images = Vec::new();
    for (f, g) in factors.iter().zip(glue) {
        if f.p() != p || g.matrix.p() != p {
            return Err(Error::ModulusMismatch(p.get(), f.p().get()));
        }
        if g.source_rank() != f.r() || g.target_rank() != target_rank {
            return Err(Error::RankMismatch(format!(
                "gluing map {}x{} for a factor of derived rank {} into rank {target_rank}",
                g.target_rank(),
                g.source_rank(),
                f.r()
            )));
        }
        images.extend((0..g.source_rank()).map(|j| g.matrix.column(j)));
    }
    if !Subspace::span(p, target_rank, &images).is_full() {
        return Err(Error::SpanDeficient);
    }
    let blocks: Vec<CommutatorStructure> = factors.iter().zip(glue).map(|(f, g)| f.map_derived(&g.matrix)).collect();
    let d: usize = blocks.iter().map(|b| b.d()).sum();
    let forms = (0..target_rank)
        .map(|k| {
            blocks
                .iter()
                .map(|b| b.form(k).clone())
                .reduce(|acc, m| acc.direct_sum(&m))
                .expect("at least one factor")
        })
        .collect();
    let out = CommutatorStructure::new(p, d, forms)?;
    Ok(out)
}

/// Independent, mutually commuting parts that sum to `V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    parts: Vec<Subspace>,
    factor_structures: Vec<CommutatorStructure>,
}

impl Decomposition {
    /// Checks independence, spanning, and that different parts commute.
    pub fn new(cs: &CommutatorStructure, parts: Vec<Subspace>) -> Result<Decomposition> {
        let total: usize = parts.iter().map(|s| s.dim()).sum();
        let sum = parts.iter().fold(Subspace::zero(cs.p(), cs.d()), |acc, s| acc.sum(s));
        if total != cs.d() || !sum.is_full() {
            return Err(Error::DimensionMismatch("parts do not form a direct sum of V".into()));
        }
        for (i, a) in parts.iter().enumerate() {
            for b in &parts[i + 1..] {
                for u in a.basis() {
                    for v in b.basis() {
                        if cs.commutator(u, v).iter().any(|&e| e != 0) {
                            return Err(Error::RankMismatch("parts do not commute".into()));
                        }
                    }
                }
            }
        }
        let factor_structures = parts.iter().map(|s| cs.restrict(s.basis())).collect();
        Ok(Decomposition { parts, factor_structures })
    }

    pub fn parts(&self) -> &[Subspace] {
        &self.parts
    }

    pub fn factor_structures(&self) -> &[CommutatorStructure] {
        &self.factor_structures
    }

    /// Part dimensions in decreasing order.
    pub fn dimensions(&self) -> Vec<usize> {
        let mut dims: Vec<usize> = self.parts.iter().map(|s| s.dim()).collect();
        dims.sort_unstable_by(|a, b| b.cmp(a));
        dims
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionOutcome {
    Decomposed(Decomposition),
    Indecomposable,
}

impl DecompositionOutcome {
    pub fn dimensions(&self, d: usize) -> Vec<usize> {
        match self {
            DecompositionOutcome::Decomposed(dec) => dec.dimensions(),
            DecompositionOutcome::Indecomposable => vec![d],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// enumerate `V1` in echelon order, subject to [`SUBSPACE_CAP`]
    Subspaces,
    /// Fitting splits and idempotents of the self-adjoint operators
    Algebraic,
    /// subspaces when within the cap, otherwise algebraic
    Auto,
}

fn require_nondegenerate(cs: &CommutatorStructure) -> Result<()> {
    if !cs.radical().is_zero() {
        return Err(Error::RankMismatch("central decomposition needs a structure with zero radical".into()));
    }
    Ok(())
}

/// Maximal central decomposition; every part is indecomposable.
pub fn find_central_decomposition(cs: &CommutatorStructure) -> Result<DecompositionOutcome> {
    find_central_decomposition_with(cs, Method::Auto)
}

pub fn find_central_decomposition_with(cs: &CommutatorStructure, method: Method) -> Result<DecompositionOutcome> {
    require_nondegenerate(cs)?;
    let p = cs.p();
    let whole = Subspace::full(p, cs.d());
    let mut done: Vec<Subspace> = Vec::new();
    let mut pending = vec![whole];
    while let Some(part) = pending.pop() {
        let sub = cs.restrict(part.basis());
        match split(&sub, method)? {
            None => done.push(part),
            Some((v1, v2)) => {
                // lift part coordinates back to V
                let lift = |s: &Subspace| -> Subspace {
                    let vecs: Vec<Vec<u8>> = s
                        .basis()
                        .iter()
                        .map(|c| combine(p, cs.d(), part.basis(), c))
                        .collect();
                    Subspace::span(p, cs.d(), &vecs)
                };
                pending.push(lift(&v2));
                pending.push(lift(&v1));
            }
        }
    }
    if done.len() == 1 {
        return Ok(DecompositionOutcome::Indecomposable);
    }
    done.sort_by_key(|s| std::cmp::Reverse(s.dim()));
    Ok(DecompositionOutcome::Decomposed(Decomposition::new(cs, done)?))
}

fn combine(p: Prime, n: usize, basis: &[Vec<u8>], coeffs: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; n];
    for (b, &c) in basis.iter().zip(coeffs) {
        for (o, &x) in out.iter_mut().zip(b) {
            *o = p.mul_add(*o, c, x);
        }
    }
    out
}

fn split(cs: &CommutatorStructure, method: Method) -> Result<Option<(Subspace, Subspace)>> {
    let d = cs.d();
    if d < 2 {
        return Ok(None);
    }
    let needed: u128 = (1..=d / 2).map(|k| subspace_count(cs.p(), d, k)).sum();
    match method {
        Method::Subspaces => {
            budget_check("candidate subspaces", needed, SUBSPACE_CAP)?;
            Ok(split_by_subspaces(cs))
        }
        Method::Algebraic => split_algebraic(cs),
        Method::Auto if needed <= SUBSPACE_CAP => Ok(split_by_subspaces(cs)),
        Method::Auto => split_algebraic(cs),
    }
}

/// `{v : [v, u] = 0 for all u in span(rows)}`
fn perp(cs: &CommutatorStructure, rows: &[Vec<u8>]) -> Subspace {
    if rows.is_empty() {
        return Subspace::full(cs.p(), cs.d());
    }
    let r = cs.r();
    let adj: Vec<Vec<u8>> = rows.iter().flat_map(|u| cs.forms().iter().map(move |f| f.vec_mul(u))).collect();
    FpMatrix::from_fn(cs.p(), rows.len() * r, cs.d(), |i, j| adj[i][j] as i64).kernel()
}

/// First `V1` in enumeration order with `V1 + perp(V1) = V`; the smallest such `V1` is indecomposable.
fn split_by_subspaces(cs: &CommutatorStructure) -> Option<(Subspace, Subspace)> {
    let (p, d) = (cs.p(), cs.d());
    let mut found = None;
    for k in 1..=d / 2 {
        for_each_subspace(p, d, k, |rows| {
            let v2 = perp(cs, rows);
            if v2.dim() != d - k {
                return true;
            }
            let v1 = Subspace::span(p, d, rows);
            if v1.intersect(&v2).is_zero() {
                found = Some((v1, v2));
                return false;
            }
            true
        });
        if found.is_some() {
            break;
        }
    }
    found
}

/// Basis of `{X : X^T A_k = A_k X for all k}`.
pub fn self_adjoint_operators(cs: &CommutatorStructure) -> Vec<FpMatrix> {
    let (p, d) = (cs.p(), cs.d());
    let var = |a: usize, b: usize| a * d + b;
    let mut eqs: Vec<Vec<i64>> = Vec::new();
    for f in cs.forms() {
        for i in 0..d {
            for j in 0..d {
                let mut row = vec![0i64; d * d];
                for m in 0..d {
                    row[var(m, i)] += f.get(m, j) as i64;
                    row[var(m, j)] -= f.get(i, m) as i64;
                }
                eqs.push(row);
            }
        }
    }
    let system = FpMatrix::from_rows(p, &eqs).expect("uniform rows");
    system
        .kernel()
        .basis()
        .iter()
        .map(|v| FpMatrix::from_vec(p, d, d, v.clone()).expect("d x d"))
        .collect()
}

fn power(m: &FpMatrix, e: usize) -> FpMatrix {
    (0..e).fold(FpMatrix::identity(m.p(), m.rows()), |acc, _| acc.mul(m).expect("square"))
}

/// Evaluates a polynomial (coefficients from the constant term up) at a square matrix.
fn poly_at(coeffs: &[u8], m: &FpMatrix) -> FpMatrix {
    let n = m.rows();
    let mut acc = FpMatrix::zeros(m.p(), n, n);
    for &c in coeffs.iter().rev() {
        acc = acc.mul(m).expect("square").add(&FpMatrix::identity(m.p(), n).scale(c)).expect("same shape");
    }
    acc
}

/// Monic divisor of `f` of least positive degree, which is irreducible; `None` when `f` is irreducible.
fn least_divisor(p: Prime, f: &[u8]) -> Option<Vec<u8>> {
    let n = f.len() - 1;
    let q = p.get() as usize;
    for deg in 1..=n / 2 {
        for idx in 0..q.pow(deg as u32) {
            let mut g: Vec<u8> = (0..deg).map(|i| ((idx / q.pow(i as u32)) % q) as u8).collect();
            g.push(1);
            if poly_rem(p, f, &g).iter().all(|&c| c == 0) {
                return Some(g);
            }
        }
    }
    None
}

fn poly_rem(p: Prime, a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = p.inv(b[db]);
    while r.len() > db {
        let c = p.mul(*r.last().expect("nonempty"), lead_inv);
        let shift = r.len() - 1 - db;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = p.sub(r[shift + i], p.mul(c, bi));
        }
        r.pop();
    }
    r
}

/// Splits `V` along `ker g(X)^d (+) im g(X)^d` for the first element and
/// irreducible `g` giving a proper split. Elements are the basis of `J`, then
/// pairwise sums; as a last resort every element of `J` is searched for a
/// nontrivial idempotent.
fn split_algebraic(cs: &CommutatorStructure) -> Result<Option<(Subspace, Subspace)>> {
    let (p, d) = (cs.p(), cs.d());
    let basis = self_adjoint_operators(cs);
    let try_element = |x: &FpMatrix| -> Option<(Subspace, Subspace)> {
        let g = least_divisor(p, &x.char_poly())?;
        let y = power(&poly_at(&g, x), d);
        let kernel = y.kernel();
        if kernel.dim() == 0 || kernel.dim() == d {
            return None;
        }
        let cols: Vec<Vec<u8>> = (0..d).map(|j| y.column(j)).collect();
        Some((kernel, Subspace::span(p, d, &cols)))
    };
    for x in &basis {
        if let Some(found) = try_element(x) {
            return Ok(Some(found));
        }
    }
    for (i, x) in basis.iter().enumerate() {
        for y in &basis[i + 1..] {
            if let Some(found) = try_element(&x.add(y)?) {
                return Ok(Some(found));
            }
        }
    }
    // exhaustive idempotent search
    let q = p.value() as u128;
    budget_check("self-adjoint operators", q.pow(basis.len() as u32), SUBSPACE_CAP)?;
    let mut digits = vec![0u8; basis.len()];
    loop {
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return Ok(None);
            }
            digits[pos] += 1;
            if digits[pos] < p.get() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
        let mut x = FpMatrix::zeros(p, d, d);
        for (c, b) in digits.iter().zip(&basis) {
            if *c != 0 {
                x = x.add(&b.scale(*c))?;
            }
        }
        if x.mul(&x)? == x && !x.is_zero() && x != FpMatrix::identity(p, d) {
            let kernel = x.kernel();
            let cols: Vec<Vec<u8>> = (0..d).map(|j| x.column(j)).collect();
            return Ok(Some((kernel, Subspace::span(p, d, &cols))));
        }
    }
}

/// Names of the indecomposable central factors, sorted, with multiplicity.
pub fn factor_multiset(cs: &CommutatorStructure) -> Result<Vec<String>> {
    let factors = match find_central_decomposition(cs)? {
        DecompositionOutcome::Indecomposable => vec![cs.clone()],
        DecompositionOutcome::Decomposed(dec) => dec.factor_structures().to_vec(),
    };
    let mut names = factors.iter().map(name_factor).collect::<Result<Vec<_>>>()?;
    names.sort();
    Ok(names)
}

/// Matches an indecomposable factor against the catalogued indecomposables.
pub fn name_factor(factor: &CommutatorStructure) -> Result<String> {
    let (special, _) = factor.strip_abelian_part();
    let p = special.p();
    for name in INDECOMPOSABLE {
        let candidate = catalog::build(name, p)?;
        if (candidate.d(), candidate.r()) != (special.d(), special.r()) {
            continue;
        }
        if distinguish(&candidate, &special).is_distinct() {
            continue;
        }
        if let IsoOutcome::Iso(_) = is_isomorphic(&candidate, &special, SearchBudget::default())? {
            return Ok(name.to_string());
        }
    }
    Err(Error::UnknownFactor {
        gens: special.d(),
        rank: special.r(),
    })
}
