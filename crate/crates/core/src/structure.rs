//! Class-two, exponent-p groups as alternating bilinear maps `V x V -> W` with
//! `V = GF(p)^d` (generators `x1..xd`) and `W = GF(p)^r` (derived basis `z1..zr`).

use std::fmt;

use crate::digraph::FlowDigraph;
use crate::error::{Error, Result};
use crate::ff::{FpMatrix, Prime, Subspace};

/// `r` alternating `d x d` matrices; `forms[k][(i, j)]` is the `z_{k+1}` exponent of `[x_{i+1}, x_{j+1}]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CommutatorStructure {
    p: Prime,
    d: usize,
    forms: Vec<FpMatrix>,
}

/// Two `m x n` matrices giving `[x_i, y_j] = z1^A(i,j) z2^B(i,j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScharlauPair {
    a: FpMatrix,
    b: FpMatrix,
}

impl ScharlauPair {
    pub fn new(a: FpMatrix, b: FpMatrix) -> Result<ScharlauPair> {
        if a.p() != b.p() {
            return Err(Error::ModulusMismatch(a.p().get(), b.p().get()));
        }
        if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
            return Err(Error::DimensionMismatch(format!(
                "Scharlau matrices are {}x{} and {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        Ok(ScharlauPair { a, b })
    }

    pub fn from_rows<R: AsRef<[i64]>>(p: Prime, a: &[R], b: &[R]) -> Result<ScharlauPair> {
        ScharlauPair::new(FpMatrix::from_rows(p, a)?, FpMatrix::from_rows(p, b)?)
    }

    pub fn p(&self) -> Prime {
        self.a.p()
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn a(&self) -> &FpMatrix {
        &self.a
    }

    pub fn b(&self) -> &FpMatrix {
        &self.b
    }

    /// Side lengths differ by at most one.
    pub fn is_normalized(&self) -> bool {
        self.m().abs_diff(self.n()) <= 1
    }
}

/// Result of [`CommutatorStructure::normal_form`]: `change_of_basis(cs, s, t)` is
/// `special` on the leading coordinates of `V` and `W`, padded by zeros.
#[derive(Debug, Clone)]
pub struct NormalForm {
    pub special: CommutatorStructure,
    pub radical_dim: usize,
    pub s: FpMatrix,
    pub t: FpMatrix,
}

impl CommutatorStructure {
    pub fn new(p: Prime, d: usize, forms: Vec<FpMatrix>) -> Result<CommutatorStructure> {
        for (k, f) in forms.iter().enumerate() {
            if f.p() != p {
                return Err(Error::ModulusMismatch(p.get(), f.p().get()));
            }
            if (f.rows(), f.cols()) != (d, d) {
                return Err(Error::DimensionMismatch(format!(
                    "structure matrix {} is {}x{}, expected {d}x{d}",
                    k + 1,
                    f.rows(),
                    f.cols()
                )));
            }
            if !f.is_alternating() {
                return Err(Error::NotAlternating(k + 1));
            }
        }
        Ok(CommutatorStructure { p, d, forms })
    }

    pub fn zero(p: Prime, d: usize, r: usize) -> CommutatorStructure {
        CommutatorStructure {
            p,
            d,
            forms: vec![FpMatrix::zeros(p, d, d); r],
        }
    }

    /// Builds from the upper triangle: `value(i, j)` for `i < j` (0-based) gives the commutator exponents.
    pub fn from_upper(p: Prime, d: usize, r: usize, mut value: impl FnMut(usize, usize) -> Vec<i64>) -> CommutatorStructure {
        let mut cs = CommutatorStructure::zero(p, d, r);
        for i in 0..d {
            for j in i + 1..d {
                let v = value(i, j);
                assert_eq!(v.len(), r);
                cs.set_pair(i, j, &v);
            }
        }
        cs
    }

    fn set_pair(&mut self, i: usize, j: usize, value: &[i64]) {
        for (f, &e) in self.forms.iter_mut().zip(value) {
            f.set(i, j, e);
            f.set(j, i, -e);
        }
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[FpMatrix] {
        &self.forms
    }

    pub fn form(&self, k: usize) -> &FpMatrix {
        &self.forms[k]
    }

    /// `[x_{i+1}, x_{j+1}]` as an exponent vector.
    pub fn value(&self, i: usize, j: usize) -> Vec<u8> {
        self.forms.iter().map(|f| f.get(i, j)).collect()
    }

    pub fn commutator(&self, u: &[u8], v: &[u8]) -> Vec<u8> {
        assert_eq!(u.len(), self.d);
        assert_eq!(v.len(), self.d);
        let p = self.p;
        self.forms
            .iter()
            .map(|f| {
                let fu = f.vec_mul(u);
                fu.iter().zip(v).fold(0u8, |acc, (&a, &b)| p.mul_add(acc, a, b))
            })
            .collect()
    }

    /// The `r x d` matrix of `u -> commutator(v, u)`.
    pub fn adjoint(&self, v: &[u8]) -> FpMatrix {
        let rows: Vec<Vec<u8>> = self.forms.iter().map(|f| f.vec_mul(v)).collect();
        FpMatrix::from_fn(self.p, self.r(), self.d, |k, j| rows[k][j] as i64)
    }

    /// `sum_k phi_k A_k`: the form obtained by composing with a functional on `W`.
    pub fn pencil_member(&self, phi: &[u8]) -> FpMatrix {
        assert_eq!(phi.len(), self.r());
        let p = self.p;
        let mut data = vec![0u8; self.d * self.d];
        for (f, &c) in self.forms.iter().zip(phi) {
            if c == 0 {
                continue;
            }
            for (x, &y) in data.iter_mut().zip(f.data()) {
                *x = p.mul_add(*x, c, y);
            }
        }
        FpMatrix::from_vec(p, self.d, self.d, data).expect("square")
    }

    /// Pushes values through a linear map `W -> GF(p)^m` given as an `m x r` matrix.
    pub fn map_derived(&self, m: &FpMatrix) -> CommutatorStructure {
        assert_eq!(m.cols(), self.r());
        let forms = (0..m.rows()).map(|k| self.pencil_member(m.row(k))).collect();
        CommutatorStructure {
            p: self.p,
            d: self.d,
            forms,
        }
    }

    pub fn from_scharlau(sp: &ScharlauPair) -> CommutatorStructure {
        let (m, n) = (sp.m(), sp.n());
        let block = |mat: &FpMatrix| {
            FpMatrix::from_fn(sp.p(), m + n, m + n, |i, j| {
                if i < m && j >= m {
                    mat.get(i, j - m) as i64
                } else if i >= m && j < m {
                    -(mat.get(j, i - m) as i64)
                } else {
                    0
                }
            })
        };
        CommutatorStructure {
            p: sp.p(),
            d: m + n,
            forms: vec![block(sp.a()), block(sp.b())],
        }
    }

    pub fn from_digraph(g: &FlowDigraph) -> CommutatorStructure {
        let mut cs = CommutatorStructure::zero(g.p(), g.gens(), g.derived_rank());
        for (i, j, flow) in g.edges() {
            let v: Vec<i64> = flow.iter().map(|&e| e as i64).collect();
            cs.set_pair(i - 1, j - 1, &v);
        }
        cs
    }

    pub fn to_digraph(&self, name: &str) -> FlowDigraph {
        let mut g = FlowDigraph::new(name, self.p, self.r(), self.d);
        for i in 0..self.d {
            for j in i + 1..self.d {
                let v = self.value(i, j);
                if v.iter().any(|&e| e != 0) {
                    let flow: Vec<i64> = v.iter().map(|&e| e as i64).collect();
                    g.add_edge(i + 1, j + 1, &flow).expect("canonical edge");
                }
            }
        }
        g
    }

    /// `A'_k = sum_l T(k,l) S^T A_l S`, i.e. `c'(u, v) = T c(Su, Sv)`: the columns of
    /// `S` are the new generators in old coordinates and `T` rewrites commutator values.
    /// Applying `(S1, T1)` then `(S2, T2)` equals applying `(S1 S2, T2 T1)`.
    pub fn change_of_basis(&self, s: &FpMatrix, t: &FpMatrix) -> Result<CommutatorStructure> {
        for m in [s, t] {
            if m.p() != self.p {
                return Err(Error::ModulusMismatch(self.p.get(), m.p().get()));
            }
        }
        if (s.rows(), s.cols()) != (self.d, self.d) || (t.rows(), t.cols()) != (self.r(), self.r()) {
            return Err(Error::DimensionMismatch(format!(
                "basis change needs {0}x{0} and {1}x{1} matrices",
                self.d,
                self.r()
            )));
        }
        if !s.is_invertible() || !t.is_invertible() {
            return Err(Error::Singular);
        }
        Ok(self.change_of_basis_unchecked(s, t))
    }

    pub(crate) fn change_of_basis_unchecked(&self, s: &FpMatrix, t: &FpMatrix) -> CommutatorStructure {
        let st = s.transpose();
        let moved: Vec<FpMatrix> = self
            .forms
            .iter()
            .map(|f| st.mul(f).and_then(|x| x.mul(s)).expect("conformable"))
            .collect();
        CommutatorStructure {
            p: self.p,
            d: self.d,
            forms: moved,
        }
        .map_derived(t)
    }

    /// `{v : A_k v = 0 for all k}`
    pub fn radical(&self) -> Subspace {
        if self.forms.is_empty() {
            return Subspace::full(self.p, self.d);
        }
        let stacked = FpMatrix::from_fn(self.p, self.r() * self.d, self.d, |row, j| {
            self.forms[row / self.d].get(row % self.d, j) as i64
        });
        stacked.kernel()
    }

    /// Span in `W` of all commutator values.
    pub fn derived_span(&self) -> Subspace {
        let mut values = Vec::new();
        for i in 0..self.d {
            for j in i + 1..self.d {
                values.push(self.value(i, j));
            }
        }
        Subspace::span(self.p, self.r(), &values)
    }

    pub fn is_special(&self) -> bool {
        self.radical().is_zero() && self.derived_span().is_full()
    }

    /// Structure on the subspace spanned by `basis`, in those coordinates.
    pub fn restrict(&self, basis: &[Vec<u8>]) -> CommutatorStructure {
        let s = FpMatrix::from_columns(self.p, self.d, basis);
        let st = s.transpose();
        let forms = self
            .forms
            .iter()
            .map(|f| st.mul(f).and_then(|x| x.mul(&s)).expect("conformable"))
            .collect();
        CommutatorStructure {
            p: self.p,
            d: basis.len(),
            forms,
        }
    }

    /// Keeps the first `k` derived coordinates.
    pub fn truncate_derived(&self, k: usize) -> CommutatorStructure {
        CommutatorStructure {
            p: self.p,
            d: self.d,
            forms: self.forms[..k].to_vec(),
        }
    }

    /// Moves the derived span to the leading coordinates of `W` and the radical to
    /// the trailing coordinates of `V`, then drops both complements.
    pub fn normal_form(&self) -> NormalForm {
        let p = self.p;
        let span = self.derived_span();
        let w_basis: Vec<Vec<u8>> = span.basis().iter().cloned().chain(span.standard_complement()).collect();
        let t = FpMatrix::from_columns(p, self.r(), &w_basis).invert().expect("basis");
        let rad = self.radical();
        let v_basis: Vec<Vec<u8>> = rad.standard_complement().into_iter().chain(rad.basis().iter().cloned()).collect();
        let s = FpMatrix::from_columns(p, self.d, &v_basis);
        let moved = self.change_of_basis_unchecked(&s, &t);
        let keep = self.d - rad.dim();
        let lead: Vec<Vec<u8>> = (0..keep)
            .map(|i| {
                let mut e = vec![0u8; self.d];
                e[i] = 1;
                e
            })
            .collect();
        let special = moved.restrict(&lead).truncate_derived(span.dim());
        debug_assert!(special.is_special());
        NormalForm {
            special,
            radical_dim: rad.dim(),
            s,
            t,
        }
    }

    /// The special part and the rank of the elementary abelian direct factor.
    pub fn strip_abelian_part(&self) -> (CommutatorStructure, usize) {
        let nf = self.normal_form();
        (nf.special, nf.radical_dim)
    }

    /// Base-p digits of the strict upper triangles, form by form.
    pub fn key(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.r() * self.d * self.d.saturating_sub(1) / 2);
        for f in &self.forms {
            for i in 0..self.d {
                for j in i + 1..self.d {
                    out.push(f.get(i, j));
                }
            }
        }
        out
    }
}

impl fmt::Debug for CommutatorStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CommutatorStructure(p={}, d={}, r={}", self.p, self.d, self.r())?;
        for i in 0..self.d {
            for j in i + 1..self.d {
                let v = self.value(i, j);
                if v.iter().any(|&e| e != 0) {
                    write!(f, ", {}{}:{:?}", i + 1, j + 1, v)?;
                }
            }
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    fn g531(p: Prime) -> CommutatorStructure {
        CommutatorStructure::from_scharlau(&ScharlauPair::from_rows(p, &[[1, 0]], &[[0, 1]]).unwrap())
    }

    #[test]
    fn scharlau_531() {
        let cs = g531(f(3));
        assert_eq!((cs.d(), cs.r()), (3, 2));
        assert_eq!(cs.value(0, 1), vec![1, 0]);
        assert_eq!(cs.value(0, 2), vec![0, 1]);
        assert_eq!(cs.value(1, 2), vec![0, 0]);
        assert_eq!(cs.value(1, 0), vec![2, 0]);
        assert_eq!(cs.commutator(&[1, 0, 0], &[0, 0, 1]), vec![0, 1]);
        assert!(cs.is_special());
        assert!(cs.radical().is_zero());
    }

    #[test]
    fn zero_pair_is_abelian() {
        let p = f(3);
        let cs = CommutatorStructure::from_scharlau(&ScharlauPair::from_rows(p, &[[0]], &[[0]]).unwrap());
        assert_eq!((cs.d(), cs.r()), (2, 2));
        assert!(cs.forms().iter().all(|m| m.is_zero()));
        assert!(!cs.is_special());
        assert_eq!(cs.radical().dim(), 2);
        assert!(cs.derived_span().is_zero());
    }

    #[test]
    fn rejects_bad_forms() {
        let p = f(3);
        let m = FpMatrix::from_rows(p, &[[0, 1], [1, 0]]).unwrap();
        assert_eq!(CommutatorStructure::new(p, 2, vec![m]), Err(Error::NotAlternating(1)));
        let pair = ScharlauPair::from_rows(p, &[[1, 0, 0]], &[[0, 1, 0]]).unwrap();
        assert!(!pair.is_normalized());
        assert!(ScharlauPair::new(FpMatrix::zeros(p, 1, 2), FpMatrix::zeros(p, 2, 1)).is_err());
    }

    #[test]
    fn digraph_round_trip() {
        let cs = g531(f(5));
        let g = cs.to_digraph("531");
        assert_eq!(g.edge_count(), 2);
        assert_eq!(CommutatorStructure::from_digraph(&g), cs);
        let empty = CommutatorStructure::zero(f(3), 3, 2);
        assert_eq!(empty.to_digraph("z").edge_count(), 0);
    }

    #[test]
    fn elementary_substitutions() {
        let p = f(5);
        // x1 -> x2 : z1, x2 -> x3 : z2
        let cs = CommutatorStructure::from_upper(p, 3, 2, |i, j| match (i, j) {
            (0, 1) => vec![1, 0],
            (1, 2) => vec![0, 1],
            _ => vec![0, 0],
        });
        let id2 = FpMatrix::identity(p, 2);
        // x2' = x1^a x2 leaves every flow alone
        let mut s = FpMatrix::identity(p, 3);
        s.set(0, 1, 3);
        assert_eq!(cs.change_of_basis(&s, &id2).unwrap(), cs);
        // x3' = x1^a x3^b turns [x2, x3] into z1^-a z2^b
        let (a, b) = (2, 3);
        let mut s = FpMatrix::identity(p, 3);
        s.set(0, 2, a);
        s.set(2, 2, b);
        let moved = cs.change_of_basis(&s, &id2).unwrap();
        assert_eq!(moved.value(1, 2), vec![p.reduce(-a), p.reduce(b)]);
        assert_eq!(moved.value(0, 1), vec![1, 0]);
        assert!(cs.change_of_basis(&FpMatrix::zeros(p, 3, 3), &id2).is_err());
    }

    #[test]
    fn radical_and_strip() {
        let p = f(3);
        let cs = CommutatorStructure::from_upper(p, 4, 2, |i, j| match (i, j) {
            (0, 1) => vec![1, 0],
            (0, 3) => vec![0, 1],
            _ => vec![0, 0],
        });
        assert_eq!(cs.radical(), Subspace::span(p, 4, &[vec![0, 0, 1, 0]]));
        let (special, k) = cs.strip_abelian_part();
        assert_eq!(k, 1);
        assert_eq!((special.d(), special.r()), (3, 2));
        assert!(special.is_special());

        let (empty, k) = CommutatorStructure::zero(p, 2, 0).strip_abelian_part();
        assert_eq!((empty.d(), empty.r(), k), (0, 0, 2));

        // E3 declared with r = 2
        let e3 = CommutatorStructure::from_upper(p, 2, 2, |_, _| vec![1, 0]);
        assert_eq!(e3.derived_span().dim(), 1);
        assert!(!e3.is_special());
        let (s, k) = e3.strip_abelian_part();
        assert_eq!((s.d(), s.r(), k), (2, 1, 0));
    }

    #[test]
    fn normal_form_matches_basis_change() {
        let p = f(5);
        let cs = CommutatorStructure::from_upper(p, 4, 3, |i, j| match (i, j) {
            (1, 2) => vec![1, 2, 0],
            (1, 3) => vec![0, 1, 0],
            (2, 3) => vec![3, 0, 0],
            _ => vec![0, 0, 0],
        });
        let nf = cs.normal_form();
        let moved = cs.change_of_basis(&nf.s, &nf.t).unwrap();
        let k = nf.special.d();
        for i in 0..cs.d() {
            for j in 0..cs.d() {
                let v = moved.value(i, j);
                if i < k && j < k {
                    assert_eq!(&v[..nf.special.r()], &nf.special.value(i, j)[..]);
                }
                assert!(v[nf.special.r()..].iter().all(|&e| e == 0));
                if i >= k || j >= k {
                    assert!(v.iter().all(|&e| e == 0));
                }
            }
        }
    }
}
