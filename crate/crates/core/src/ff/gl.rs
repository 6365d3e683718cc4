use super::{FpMatrix, Prime};
use crate::error::{budget_check, Result};

/// `|GL(d, p)| = prod_{i<d} (p^d - p^i)`
pub fn gl_order(d: usize, p: Prime) -> u128 {
    let q = p.value() as u128;
    let qd = q.pow(d as u32);
    (0..d).map(|i| qd - q.pow(i as u32)).product()
}

/// A generating set of GL(d, p) with at most three elements: a primitive scalar in
/// the (1,1) position, the cyclic shift of coordinates, and the transvection
/// `I + E_{12}`. Conjugating the transvection by powers of the shift yields every
/// `I + E_{i,i+1}` (including the wrap-around), whose commutators give all
/// elementary transvections and hence SL(d, p); the scalar fixes the determinant.
pub fn gl_generators(d: usize, p: Prime) -> Vec<FpMatrix> {
    assert!(d >= 1);
    let mut scalar = FpMatrix::identity(p, d);
    scalar.set(0, 0, p.primitive_root() as i64);
    let mut gens = vec![scalar];
    if d >= 2 {
        gens.push(FpMatrix::from_fn(p, d, d, |i, j| ((i + 1) % d == j) as i64));
        let mut t = FpMatrix::identity(p, d);
        t.set(0, 1, 1);
        gens.push(t);
    }
    gens
}

/// Every invertible `d x d` matrix over GF(p), exactly once, built column by column:
/// each new column ranges over the vectors outside the span of the earlier ones.
pub struct GlEnumerator {
    p: Prime,
    d: usize,
    /// candidate index (base-p encoding of the column) per column
    choice: Vec<u64>,
    /// `in_span[k][v]`: whether vector `v` lies in the span of the first k columns
    in_span: Vec<Vec<bool>>,
    /// members of those spans, as encoded vectors
    members: Vec<Vec<u64>>,
    started: bool,
    done: bool,
}

/// Enumerates GL(d, p), refusing when its order exceeds `cap`.
pub fn enumerate_gl(d: usize, p: Prime, cap: u128) -> Result<GlEnumerator> {
    budget_check("GL(d,p) enumeration", gl_order(d, p), cap)?;
    let total = (p.get() as usize).pow(d as u32);
    let mut zero_span = vec![false; total];
    zero_span[0] = true;
    Ok(GlEnumerator {
        p,
        d,
        choice: vec![0; d],
        in_span: (0..d).map(|k| if k == 0 { zero_span.clone() } else { vec![false; total] }).collect(),
        members: (0..d).map(|k| if k == 0 { vec![0] } else { Vec::new() }).collect(),
        started: false,
        done: d == 0,
    })
}

impl GlEnumerator {
    /// Encoded `a + c * b`, digit by digit.
    fn axpy(&self, a: u64, c: u8, b: u64) -> u64 {
        let q = self.p.get() as u64;
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.d {
            let digit = self.p.mul_add((a % q) as u8, c, (b % q) as u8) as u64;
            out += digit * place;
            place *= q;
            a /= q;
            b /= q;
        }
        out
    }

    /// Moves column `k` to its next admissible candidate at or after `from`.
    fn place(&mut self, k: usize, from: u64) -> bool {
        let total = self.in_span[k].len() as u64;
        let Some(idx) = (from..total).find(|&i| !self.in_span[k][i as usize]) else {
            return false;
        };
        self.choice[k] = idx;
        if k + 1 < self.d {
            let mut flags = std::mem::take(&mut self.in_span[k + 1]);
            for &m in &self.members[k + 1] {
                flags[m as usize] = false;
            }
            let mut members = Vec::with_capacity(self.members[k].len() * self.p.get() as usize);
            for &m in &self.members[k] {
                for c in 0..self.p.get() {
                    let v = self.axpy(m, c, idx);
                    flags[v as usize] = true;
                    members.push(v);
                }
            }
            self.in_span[k + 1] = flags;
            self.members[k + 1] = members;
        }
        true
    }

    fn current(&self) -> FpMatrix {
        let q = self.p.get() as u64;
        let d = self.d;
        let mut data = vec![0u8; d * d];
        for (j, &c) in self.choice.iter().enumerate() {
            let mut idx = c;
            for i in (0..d).rev() {
                data[i * d + j] = (idx % q) as u8;
                idx /= q;
            }
        }
        FpMatrix::from_vec(self.p, d, d, data).expect("square data")
    }
}

impl Iterator for GlEnumerator {
    type Item = FpMatrix;

    fn next(&mut self) -> Option<FpMatrix> {
        if self.done {
            return None;
        }
        let d = self.d;
        if !self.started {
            self.started = true;
            for k in 0..d {
                let ok = self.place(k, 0);
                debug_assert!(ok);
            }
            return Some(self.current());
        }
        // bump the deepest column that still has candidates, then refill below it
        let mut k = d - 1;
        while !self.place(k, self.choice[k] + 1) {
            if k == 0 {
                self.done = true;
                return None;
            }
            k -= 1;
        }
        for j in k + 1..d {
            let ok = self.place(j, 0);
            debug_assert!(ok);
        }
        Some(self.current())
    }
}
