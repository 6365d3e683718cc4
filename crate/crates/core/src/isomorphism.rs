//! Isomorphism testing, invariant-based distinction, and orbit classification.
//!
//! `cs1` and `cs2` are isomorphic when some invertible `(S, T)` gives
//! `change_of_basis(cs1, S, T) == cs2`. The search runs over `T` in GL(r, p),
//! discarding any `T` that mismatches pencil ranks, point classes or (for even
//! `d`) the characteristic polynomial of `M(phi_a)^-1 M(phi_b)`, and then builds
//! `S` column by column under the linear constraints the pinned columns impose.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{budget_check, Error, Result};
use crate::ff::{enumerate_gl, gl_generators, gl_order, projective_count, projective_points, FpMatrix, Prime, Subspace};
use crate::invariants::{
    center_preimage_profile, frequency_vector, preimage_multiset, rank_signature, small_centralizer_properties,
    POINT_CAP,
};
use crate::structure::CommutatorStructure;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// candidate columns examined before giving up
    pub max_nodes: u64,
    /// largest GL(r, p) enumerated for the derived-group factor
    pub max_gl_size: u128,
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget {
            max_nodes: 100_000_000,
            max_gl_size: 10_000_000,
        }
    }
}

/// `(S, T)` with `change_of_basis(source, S, T) == target`, checked on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    s: FpMatrix,
    t: FpMatrix,
}

impl IsoWitness {
    pub fn new(source: &CommutatorStructure, target: &CommutatorStructure, s: FpMatrix, t: FpMatrix) -> Result<IsoWitness> {
        if source.change_of_basis(&s, &t)? != *target {
            return Err(Error::RankMismatch("witness does not carry source to target".into()));
        }
        Ok(IsoWitness { s, t })
    }

    pub fn s(&self) -> &FpMatrix {
        &self.s
    }

    pub fn t(&self) -> &FpMatrix {
        &self.t
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoOutcome {
    Iso(IsoWitness),
    NotIso,
    /// the node budget ran out, or a group to enumerate was over its cap
    Exhausted { nodes: u64 },
}

impl IsoOutcome {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoOutcome::Iso(_))
    }
}

enum Search {
    Found(FpMatrix, FpMatrix),
    NotFound,
    Exhausted,
}

pub fn is_isomorphic(cs1: &CommutatorStructure, cs2: &CommutatorStructure, budget: SearchBudget) -> Result<IsoOutcome> {
    if cs1.p() != cs2.p() {
        return Err(Error::ModulusMismatch(cs1.p().get(), cs2.p().get()));
    }
    if (cs1.d(), cs1.r()) != (cs2.d(), cs2.r()) {
        return Ok(IsoOutcome::NotIso);
    }
    let p = cs1.p();
    if cs1 == cs2 {
        let w = IsoWitness {
            s: FpMatrix::identity(p, cs1.d()),
            t: FpMatrix::identity(p, cs1.r()),
        };
        return Ok(IsoOutcome::Iso(w));
    }
    let nf1 = cs1.normal_form();
    let nf2 = cs2.normal_form();
    let (a, b) = (&nf1.special, &nf2.special);
    if (a.d(), a.r()) != (b.d(), b.r()) {
        return Ok(IsoOutcome::NotIso);
    }
    let mut nodes = 0u64;
    match special_search(a, b, budget, &mut nodes)? {
        Search::NotFound => Ok(IsoOutcome::NotIso),
        Search::Exhausted => Ok(IsoOutcome::Exhausted { nodes }),
        Search::Found(sx, tx) => {
            // pad the special witness by identities on the radical and the derived complement
            let sx = sx.direct_sum(&FpMatrix::identity(p, nf1.radical_dim));
            let tx = tx.direct_sum(&FpMatrix::identity(p, cs1.r() - a.r()));
            let s = nf1.s.mul(&sx)?.mul(&nf2.s.invert()?)?;
            let t = nf2.t.invert()?.mul(&tx)?.mul(&nf1.t)?;
            Ok(IsoOutcome::Iso(IsoWitness::new(cs1, cs2, s, t)?))
        }
    }
}

/// Image of `u -> [v, u]`, the finest cheap invariant of a point.
fn point_class(cs: &CommutatorStructure, v: &[u8]) -> Subspace {
    let adj = cs.adjoint(v);
    let cols: Vec<Vec<u8>> = (0..cs.d()).map(|j| adj.column(j)).collect();
    Subspace::span(cs.p(), cs.r(), &cols)
}

fn map_subspace(t: &FpMatrix, s: &Subspace) -> Subspace {
    let images: Vec<Vec<u8>> = s.basis().iter().map(|v| t.mul_vec(v)).collect();
    Subspace::span(t.p(), t.rows(), &images)
}

/// Scales a nonzero vector so its first nonzero entry is 1.
fn normalize(p: Prime, v: &[u8]) -> Vec<u8> {
    let lead = v.iter().find(|&&x| x != 0).copied().unwrap_or(1);
    let inv = p.inv(lead);
    v.iter().map(|&x| p.mul(x, inv)).collect()
}

/// Incremental echelon basis used for independence tests.
struct Echelon {
    p: Prime,
    rows: Vec<(usize, Vec<u8>)>,
}

impl Echelon {
    fn new(p: Prime) -> Echelon {
        Echelon { p, rows: Vec::new() }
    }

    fn reduce(&self, v: &[u8]) -> Vec<u8> {
        let p = self.p;
        let mut w = v.to_vec();
        for (pc, row) in &self.rows {
            let c = w[*pc];
            if c != 0 {
                let nc = p.neg(c);
                for (x, &y) in w.iter_mut().zip(row) {
                    *x = p.mul_add(*x, nc, y);
                }
            }
        }
        w
    }

    fn is_independent(&self, v: &[u8]) -> bool {
        self.reduce(v).iter().any(|&x| x != 0)
    }

    fn push(&mut self, v: &[u8]) {
        let w = self.reduce(v);
        let pc = w.iter().position(|&x| x != 0).expect("independent vector");
        let inv = self.p.inv(w[pc]);
        let w = w.iter().map(|&x| self.p.mul(x, inv)).collect();
        self.rows.push((pc, w));
    }

    fn pop(&mut self) {
        self.rows.pop();
    }
}

struct Target {
    /// chosen basis of the target space
    base: Vec<Vec<u8>>,
    /// `forced[i] = Some(j)` when `base[i] = X base[j]`
    forced: Vec<Option<usize>>,
    classes: Vec<Subspace>,
    gram: Vec<Vec<Vec<u8>>>,
}

/// Two pencil members of the target with the first invertible, and `X = M_a^-1 M_b`.
struct PencilPair {
    phi_a: Vec<u8>,
    phi_b: Vec<u8>,
    x: FpMatrix,
    char_poly: Vec<u8>,
}

fn pencil_pair(b: &CommutatorStructure, lines: &[Vec<u8>]) -> Option<PencilPair> {
    if b.d() % 2 == 1 || b.r() < 2 {
        return None;
    }
    let ia = lines.iter().position(|phi| b.pencil_member(phi).is_invertible())?;
    let phi_a = lines[ia].clone();
    let phi_b = lines.iter().find(|phi| **phi != phi_a)?.clone();
    let x = b.pencil_member(&phi_a).invert().ok()?.mul(&b.pencil_member(&phi_b)).ok()?;
    let char_poly = x.char_poly();
    Some(PencilPair {
        phi_a,
        phi_b,
        x,
        char_poly,
    })
}

fn special_search(a: &CommutatorStructure, b: &CommutatorStructure, budget: SearchBudget, nodes: &mut u64) -> Result<Search> {
    let p = a.p();
    let (d, r) = (a.d(), a.r());
    if d == 0 {
        return Ok(Search::Found(FpMatrix::identity(p, 0), FpMatrix::identity(p, r)));
    }
    budget_check("projective points of V", projective_count(p, d), POINT_CAP)?;
    if gl_order(r, p) > budget.max_gl_size {
        return Ok(Search::Exhausted);
    }

    let lines: Vec<Vec<u8>> = projective_points(p, r).collect();
    let ranks_a: HashMap<Vec<u8>, usize> = lines.iter().map(|phi| (phi.clone(), a.pencil_member(phi).rank())).collect();
    let ranks_b: Vec<(Vec<u8>, usize)> = lines.iter().map(|phi| (phi.clone(), b.pencil_member(phi).rank())).collect();

    let mut groups_a: HashMap<Subspace, Vec<Vec<u8>>> = HashMap::new();
    for v in projective_points(p, d) {
        groups_a.entry(point_class(a, &v)).or_default().push(v);
    }
    let mut groups_b: HashMap<Subspace, Vec<Vec<u8>>> = HashMap::new();
    for v in projective_points(p, d) {
        groups_b.entry(point_class(b, &v)).or_default().push(v);
    }
    let sizes_b: HashMap<&Subspace, usize> = groups_b.iter().map(|(k, v)| (k, v.len())).collect();

    let pair = pencil_pair(b, &lines);
    let target = choose_target(b, &groups_b, pair.as_ref().map(|pp| &pp.x));

    for t in enumerate_gl(r, p, budget.max_gl_size)? {
        // pencil ranks: rank M_b(phi) = rank M_a(phi T)
        let ranks_ok = ranks_b
            .iter()
            .all(|(phi, rk)| ranks_a[&normalize(p, &t.vec_mul(phi))] == *rk);
        if !ranks_ok {
            continue;
        }
        // point classes of a, moved by T, must match those of b with multiplicity
        let mut moved: HashMap<Subspace, &Vec<Vec<u8>>> = HashMap::with_capacity(groups_a.len());
        for (k, pts) in &groups_a {
            moved.insert(map_subspace(&t, k), pts);
        }
        let classes_ok = moved.len() == sizes_b.len()
            && sizes_b.iter().all(|(k, n)| moved.get(*k).map(|v| v.len()) == Some(*n));
        if !classes_ok {
            continue;
        }
        let at = a.map_derived(&t);
        let x_source = match &pair {
            Some(pp) => {
                let m_a = at.pencil_member(&pp.phi_a);
                let m_b = at.pencil_member(&pp.phi_b);
                let xs = m_a.invert()?.mul(&m_b)?;
                if xs.char_poly() != pp.char_poly {
                    continue;
                }
                Some(xs)
            }
            None => None,
        };
        let mut dfs = Dfs {
            at: &at,
            target: &target,
            buckets: &moved,
            x_source: x_source.as_ref(),
            chosen: Vec::with_capacity(d),
            rows: Vec::with_capacity(d * r),
            echelon: Echelon::new(p),
            solution: None,
            nodes,
            max_nodes: budget.max_nodes,
        };
        match dfs.run()? {
            Search::Found(s_images, _) => {
                // S maps base[i] to the chosen column i
                let base = FpMatrix::from_columns(p, d, &target.base);
                let s = s_images.mul(&base.invert()?)?;
                debug_assert_eq!(a.change_of_basis(&s, &t)?, *b);
                return Ok(Search::Found(s, t));
            }
            Search::Exhausted => return Ok(Search::Exhausted),
            Search::NotFound => {}
        }
    }
    Ok(Search::NotFound)
}

/// Target basis: points from the rarest classes first; with a pencil pair,
/// each chosen point is followed by its images under `X` while they stay independent.
fn choose_target(b: &CommutatorStructure, groups: &HashMap<Subspace, Vec<Vec<u8>>>, x: Option<&FpMatrix>) -> Target {
    let p = b.p();
    let d = b.d();
    let mut order: Vec<(&Subspace, &Vec<Vec<u8>>)> = groups.iter().collect();
    order.sort_by(|l, r| l.1.len().cmp(&r.1.len()).then_with(|| l.0.cmp(r.0)));
    let mut ech = Echelon::new(p);
    let mut base: Vec<Vec<u8>> = Vec::new();
    let mut forced = Vec::new();
    'outer: for (_, pts) in order {
        for v in pts {
            if base.len() == d {
                break 'outer;
            }
            if !ech.is_independent(v) {
                continue;
            }
            ech.push(v);
            base.push(v.clone());
            forced.push(None);
            if let Some(x) = x {
                let mut cur = v.clone();
                loop {
                    let next = x.mul_vec(&cur);
                    if base.len() == d || !ech.is_independent(&next) {
                        break;
                    }
                    ech.push(&next);
                    forced.push(Some(base.len() - 1));
                    base.push(next.clone());
                    cur = next;
                }
            }
        }
    }
    debug_assert_eq!(base.len(), d);
    let classes = base.iter().map(|v| point_class(b, v)).collect();
    let gram = base
        .iter()
        .map(|u| base.iter().map(|v| b.commutator(u, v)).collect())
        .collect();
    Target {
        base,
        forced,
        classes,
        gram,
    }
}

struct Dfs<'a> {
    at: &'a CommutatorStructure,
    target: &'a Target,
    buckets: &'a HashMap<Subspace, &'a Vec<Vec<u8>>>,
    x_source: Option<&'a FpMatrix>,
    chosen: Vec<Vec<u8>>,
    /// `rows[j * r + k]` is `chosen[j]^T A_k`
    rows: Vec<Vec<u8>>,
    echelon: Echelon,
    solution: Option<Vec<Vec<u8>>>,
    nodes: &'a mut u64,
    max_nodes: u64,
}

enum Step {
    Continue,
    Done,
    OutOfBudget,
}

impl Dfs<'_> {
    fn run(&mut self) -> Result<Search> {
        match self.descend() {
            Step::Done => {
                let p = self.at.p();
                let cols = self.solution.take().expect("complete assignment");
                Ok(Search::Found(FpMatrix::from_columns(p, self.at.d(), &cols), FpMatrix::identity(p, 0)))
            }
            Step::Continue => Ok(Search::NotFound),
            Step::OutOfBudget => Ok(Search::Exhausted),
        }
    }

    fn satisfies(&self, i: usize, x: &[u8]) -> bool {
        let p = self.at.p();
        let r = self.at.r();
        (0..i).all(|j| {
            (0..r).all(|k| {
                let row = &self.rows[j * r + k];
                let dot = row.iter().zip(x).fold(0u8, |acc, (&a, &b)| p.mul_add(acc, a, b));
                dot == self.target.gram[j][i][k]
            })
        })
    }

    /// Tries `x` as column `i`; recurses when it fits.
    fn try_candidate(&mut self, i: usize, x: Vec<u8>, class_known: bool) -> Step {
        *self.nodes += 1;
        if *self.nodes > self.max_nodes {
            return Step::OutOfBudget;
        }
        if !self.satisfies(i, &x) || !self.echelon.is_independent(&x) {
            return Step::Continue;
        }
        if !class_known && point_class(self.at, &x) != self.target.classes[i] {
            return Step::Continue;
        }
        self.echelon.push(&x);
        for f in self.at.forms() {
            self.rows.push(f.vec_mul(&x));
        }
        self.chosen.push(x);
        let step = self.descend();
        self.chosen.pop();
        for _ in 0..self.at.r() {
            self.rows.pop();
        }
        self.echelon.pop();
        step
    }

    fn descend(&mut self) -> Step {
        let i = self.chosen.len();
        let d = self.at.d();
        if i == d {
            self.solution = Some(self.chosen.clone());
            return Step::Done;
        }
        let p = self.at.p();
        if let (Some(parent), Some(x)) = (self.target.forced[i], self.x_source) {
            let cand = x.mul_vec(&self.chosen[parent]);
            return self.try_candidate(i, cand, false);
        }
        let bucket: &Vec<Vec<u8>> = match self.buckets.get(&self.target.classes[i]) {
            Some(b) => b,
            None => return Step::Continue,
        };
        let bucket_size = bucket.len() as u128 * (p.value() as u128 - 1);

        let r = self.at.r();
        let (x0, kernel) = if i == 0 {
            (vec![0u8; d], (0..d).map(|c| unit(d, c)).collect::<Vec<_>>())
        } else {
            let m = FpMatrix::from_fn(p, i * r, d, |row, c| self.rows[row][c] as i64);
            let rhs: Vec<u8> = (0..i).flat_map(|j| self.target.gram[j][i].clone()).collect();
            match m.solve(&rhs) {
                Some(sol) => sol,
                None => return Step::Continue,
            }
        };
        let affine_size = (p.value() as u128).pow(kernel.len() as u32);

        if affine_size <= bucket_size {
            let mut digits = vec![0u8; kernel.len()];
            loop {
                let mut x = x0.clone();
                for (c, k) in digits.iter().zip(&kernel) {
                    if *c != 0 {
                        for (xi, &ki) in x.iter_mut().zip(k) {
                            *xi = p.mul_add(*xi, *c, ki);
                        }
                    }
                }
                if x.iter().any(|&e| e != 0) {
                    match self.try_candidate(i, x, false) {
                        Step::Continue => {}
                        other => return other,
                    }
                }
                // odometer over the kernel coordinates
                let mut pos = 0;
                loop {
                    if pos == digits.len() {
                        return Step::Continue;
                    }
                    digits[pos] += 1;
                    if digits[pos] < p.get() {
                        break;
                    }
                    digits[pos] = 0;
                    pos += 1;
                }
            }
        } else {
            for q in bucket.iter() {
                for lambda in 1..p.get() {
                    let x: Vec<u8> = q.iter().map(|&e| p.mul(e, lambda)).collect();
                    match self.try_candidate(i, x, true) {
                        Step::Continue => {}
                        other => return other,
                    }
                }
            }
            Step::Continue
        }
    }
}

fn unit(d: usize, c: usize) -> Vec<u8> {
    let mut v = vec![0u8; d];
    v[c] = 1;
    v
}

/// The invariants `distinguish` compares, in the order they are tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Discriminator {
    /// number of generators, derived rank, or specialness
    Shape,
    Frequency,
    SmallCentralizerSubspace,
    SmallCentralizerCommuting,
    AbelianPreimage,
    RankSignature,
}

impl Discriminator {
    pub fn label(self) -> &'static str {
        match self {
            Discriminator::Shape => "shape",
            Discriminator::Frequency => "frequency",
            Discriminator::SmallCentralizerSubspace => "small-centralizer subspace",
            Discriminator::SmallCentralizerCommuting => "small-centralizer commuting",
            Discriminator::AbelianPreimage => "abelian preimage",
            Discriminator::RankSignature => "rank signature",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Distinction {
    /// every invariant that differs
    Distinct(Vec<Discriminator>),
    Unknown,
}

impl Distinction {
    pub fn is_distinct(&self) -> bool {
        matches!(self, Distinction::Distinct(_))
    }

    pub fn discriminators(&self) -> &[Discriminator] {
        match self {
            Distinction::Distinct(v) => v,
            Distinction::Unknown => &[],
        }
    }
}

/// Compares invariants; point-wise invariants over the cap are skipped.
pub fn distinguish(cs1: &CommutatorStructure, cs2: &CommutatorStructure) -> Distinction {
    let mut found = Vec::new();
    if (cs1.d(), cs1.r(), cs1.is_special()) != (cs2.d(), cs2.r(), cs2.is_special()) {
        return Distinction::Distinct(vec![Discriminator::Shape]);
    }
    if cs1.r() == 2 {
        if frequency_vector(cs1).ok() != frequency_vector(cs2).ok() {
            found.push(Discriminator::Frequency);
        }
    }
    if let (Ok(s1), Ok(s2)) = (small_centralizer_properties(cs1), small_centralizer_properties(cs2)) {
        if s1.is_subspace != s2.is_subspace {
            found.push(Discriminator::SmallCentralizerSubspace);
        }
        if s1.is_commuting != s2.is_commuting {
            found.push(Discriminator::SmallCentralizerCommuting);
        }
    }
    if cs1.r() == 2 {
        let m1 = center_preimage_profile(cs1).map(|pr| preimage_multiset(&pr));
        let m2 = center_preimage_profile(cs2).map(|pr| preimage_multiset(&pr));
        if m1.ok() != m2.ok() {
            found.push(Discriminator::AbelianPreimage);
        }
    }
    if let (Ok(r1), Ok(r2)) = (rank_signature(cs1), rank_signature(cs2)) {
        if r1 != r2 {
            found.push(Discriminator::RankSignature);
        }
    }
    if found.is_empty() {
        Distinction::Unknown
    } else {
        Distinction::Distinct(found)
    }
}

#[derive(Debug, Clone)]
pub struct Orbit {
    /// the member with the smallest index
    pub representative: CommutatorStructure,
    pub size: u64,
    pub special: bool,
}

/// Every derived-rank-2 structure on `d` generators, partitioned into
/// GL(d, p) x GL(2, p) orbits.
#[derive(Debug, Clone)]
pub struct Classification {
    pub d: usize,
    pub p: Prime,
    pub total: u64,
    pub orbits: Vec<Orbit>,
    labels: Vec<u32>,
}

impl Classification {
    pub fn special_orbits(&self) -> impl Iterator<Item = &Orbit> {
        self.orbits.iter().filter(|o| o.special)
    }

    /// Orbit index of a structure with the classified shape.
    pub fn orbit_of(&self, cs: &CommutatorStructure) -> usize {
        assert_eq!((cs.p(), cs.d(), cs.r()), (self.p, self.d, 2));
        self.labels[encode(cs) as usize] as usize
    }

    /// The structure with the given index, digits taken in `key` order.
    pub fn structure(&self, index: u64) -> CommutatorStructure {
        decode(self.p, self.d, 2, index)
    }
}

fn encode(cs: &CommutatorStructure) -> u64 {
    let q = cs.p().value() as u64;
    cs.key().iter().rev().fold(0u64, |acc, &digit| acc * q + digit as u64)
}

fn decode(p: Prime, d: usize, r: usize, mut index: u64) -> CommutatorStructure {
    let q = p.value() as u64;
    let pairs = d * d.saturating_sub(1) / 2;
    let digits: Vec<i64> = (0..r * pairs)
        .map(|_| {
            let digit = index % q;
            index /= q;
            digit as i64
        })
        .collect();
    let mut pos = 0;
    let mut by_pair = vec![vec![0i64; r]; pairs];
    for k in 0..r {
        for slot in by_pair.iter_mut() {
            slot[k] = digits[pos];
            pos += 1;
        }
    }
    let mut next = 0;
    CommutatorStructure::from_upper(p, d, r, |_, _| {
        next += 1;
        by_pair[next - 1].clone()
    })
}

/// Structure count above which `classify_all` refuses.
pub const CLASSIFY_CAP: u128 = 50_000_000;

pub fn classify_all(d: usize, p: Prime) -> Result<Classification> {
    classify_all_capped(d, p, CLASSIFY_CAP)
}

/// Orbit BFS; the visited set is a dense array indexed by the base-p value of `key`.
pub fn classify_all_capped(d: usize, p: Prime, cap: u128) -> Result<Classification> {
    let r = 2;
    let n = r * d * d.saturating_sub(1) / 2;
    let total = (p.value() as u128).pow(n as u32);
    budget_check("structures to classify", total, cap)?;
    let q = p.value() as u64;

    // each generator acts linearly on the digit vector of `key`
    let mut actions: Vec<(FpMatrix, FpMatrix)> = Vec::new();
    if d >= 1 {
        for g in gl_generators(d, p) {
            actions.push((g, FpMatrix::identity(p, r)));
        }
    }
    for h in gl_generators(r, p) {
        actions.push((FpMatrix::identity(p, d), h));
    }
    let matrices: Vec<FpMatrix> = actions
        .iter()
        .map(|(s, t)| {
            let cols: Vec<Vec<u8>> = (0..n)
                .map(|c| decode(p, d, r, q.pow(c as u32)).change_of_basis_unchecked(s, t).key())
                .collect();
            FpMatrix::from_columns(p, n, &cols)
        })
        .collect();

    let total = total as u64;
    let mut labels = vec![u32::MAX; total as usize];
    let mut orbits = Vec::new();
    let mut queue: Vec<u64> = Vec::new();
    let mut digits = vec![0u8; n];
    for start in 0..total {
        if labels[start as usize] != u32::MAX {
            continue;
        }
        let id = orbits.len() as u32;
        labels[start as usize] = id;
        queue.clear();
        queue.push(start);
        let mut head = 0;
        while head < queue.len() {
            let cur = queue[head];
            head += 1;
            let mut x = cur;
            for dgt in digits.iter_mut() {
                *dgt = (x % q) as u8;
                x /= q;
            }
            for m in &matrices {
                let image = m.mul_vec(&digits);
                let idx = image.iter().rev().fold(0u64, |acc, &e| acc * q + e as u64);
                if labels[idx as usize] == u32::MAX {
                    labels[idx as usize] = id;
                    queue.push(idx);
                }
            }
        }
        let representative = decode(p, d, r, start);
        let special = representative.is_special();
        orbits.push(Orbit {
            representative,
            size: queue.len() as u64,
            special,
        });
    }
    Ok(Classification {
        d,
        p,
        total,
        orbits,
        labels,
    })
}
