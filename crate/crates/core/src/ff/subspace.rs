use super::matrix::rref_in_place;
use super::{FpMatrix, Prime};

/// A subspace of GF(p)^n stored by its reduced row echelon basis, so equal
/// subspaces have identical representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    p: Prime,
    ambient_dim: usize,
    basis: Vec<Vec<u8>>,
}

impl Subspace {
    pub fn zero(p: Prime, n: usize) -> Subspace {
        Subspace {
            p,
            ambient_dim: n,
            basis: Vec::new(),
        }
    }

    pub fn full(p: Prime, n: usize) -> Subspace {
        let basis = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        Subspace {
            p,
            ambient_dim: n,
            basis,
        }
    }

    /// Span of arbitrary (possibly dependent) vectors of length `n`.
    pub fn span<V: AsRef<[u8]>>(p: Prime, n: usize, vectors: &[V]) -> Subspace {
        let mut data = Vec::with_capacity(vectors.len() * n);
        for v in vectors {
            let v = v.as_ref();
            assert_eq!(v.len(), n, "vector length differs from ambient dimension");
            data.extend(v.iter().map(|&x| x % p.get()));
        }
        let rank = rref_in_place(p, &mut data, vectors.len(), n).len();
        let basis = (0..rank).map(|i| data[i * n..(i + 1) * n].to_vec()).collect();
        Subspace {
            p,
            ambient_dim: n,
            basis,
        }
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient_dim
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|v| v.iter().position(|&x| x != 0).expect("echelon rows are nonzero"))
            .collect()
    }

    /// Reduces `v` against the echelon basis; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        let p = self.p;
        let mut w: Vec<u8> = v.iter().map(|&x| x % p.get()).collect();
        for (b, pc) in self.basis.iter().zip(self.pivots()) {
            let c = w[pc];
            if c != 0 {
                let nc = p.neg(c);
                for (wi, &bi) in w.iter_mut().zip(b) {
                    *wi = p.mul_add(*wi, nc, bi);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let all: Vec<&[u8]> = self.basis.iter().chain(&other.basis).map(|v| v.as_slice()).collect();
        Subspace::span(self.p, self.ambient_dim, &all)
    }

    /// `{x : <x, v> = 0 for all v}` under the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::full(self.p, self.ambient_dim);
        }
        self.as_matrix().kernel()
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    /// Basis vectors as the rows of a matrix.
    pub fn as_matrix(&self) -> FpMatrix {
        FpMatrix::from_fn(self.p, self.basis.len(), self.ambient_dim, |i, j| self.basis[i][j] as i64)
    }

    /// Unit vectors at the non-pivot positions; together with the basis they span the whole space.
    pub fn standard_complement(&self) -> Vec<Vec<u8>> {
        let piv = self.pivots();
        (0..self.ambient_dim)
            .filter(|c| !piv.contains(c))
            .map(|c| {
                let mut v = vec![0; self.ambient_dim];
                v[c] = 1;
                v
            })
            .collect()
    }

    /// Coordinates of a member vector with respect to the echelon basis.
    pub fn coordinates(&self, v: &[u8]) -> Option<Vec<u8>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots().iter().map(|&pc| v[pc] % self.p.get()).collect())
    }

    /// Number of projective points, `(p^dim - 1)/(p - 1)`.
    pub fn point_count(&self) -> u128 {
        projective_count(self.p, self.dim())
    }
}

/// `(p^n - 1)/(p - 1)`
pub fn projective_count(p: Prime, n: usize) -> u128 {
    let q = p.value() as u128;
    (q.pow(n as u32) - 1) / (q - 1)
}

/// Gaussian binomial: the number of `k`-dimensional subspaces of GF(p)^n.
pub fn subspace_count(p: Prime, n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let q = p.value() as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Normalized representatives of the 1-dimensional subspaces of GF(p)^n: the first
/// nonzero coordinate is 1. Ordered by the position of that coordinate, then
/// lexicographically in the trailing coordinates.
pub fn projective_points(p: Prime, n: usize) -> impl Iterator<Item = Vec<u8>> {
    let q = p.get() as u64;
    (0..n).flat_map(move |lead| {
        let tail = n - lead - 1;
        (0..q.pow(tail as u32)).map(move |mut idx| {
            let mut v = vec![0u8; n];
            v[lead] = 1;
            for k in (lead + 1..n).rev() {
                v[k] = (idx % q) as u8;
                idx /= q;
            }
            v
        })
    })
}

/// Visits every `k`-dimensional subspace of GF(p)^n once, as an echelon basis,
/// in lexicographic pivot order and then lexicographic order of the free entries.
/// The visitor returns `false` to stop early; the return value reports whether
/// the enumeration ran to completion.
pub fn for_each_subspace(p: Prime, n: usize, k: usize, mut visit: impl FnMut(&[Vec<u8>]) -> bool) -> bool {
    if k > n {
        return true;
    }
    let q = p.get();
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free entries: right of the row's pivot and outside every pivot column
        let slots: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| (pivots[r] + 1..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let mut rows: Vec<Vec<u8>> = pivots
            .iter()
            .map(|&pc| {
                let mut v = vec![0u8; n];
                v[pc] = 1;
                v
            })
            .collect();
        let mut digits = vec![0u8; slots.len()];
        'free: loop {
            if !visit(&rows) {
                return false;
            }
            for i in (0..slots.len()).rev() {
                let (r, c) = slots[i];
                digits[i] += 1;
                if digits[i] < q {
                    rows[r][c] = digits[i];
                    continue 'free;
                }
                digits[i] = 0;
                rows[r][c] = 0;
            }
            break;
        }
        let Some(j) = (0..k).rev().find(|&j| pivots[j] < n - k + j) else {
            return true;
        };
        pivots[j] += 1;
        for t in j + 1..k {
            pivots[t] = pivots[t - 1] + 1;
        }
    }
}
