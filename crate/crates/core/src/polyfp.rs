//! Univariate polynomials over a prime field F_p and their factorization.
//!
//! Coefficients are stored low degree first; the zero polynomial is the empty
//! vector. Factorization is the usual square-free / distinct-degree /
//! equal-degree pipeline with a seeded generator, so results are reproducible.

use crate::arith::{inv_mod, mul_mod};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type PolyFp = Vec<u64>;

#[derive(Clone, Copy, Debug)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        Fp { p }
    }

    pub fn trim(&self, mut a: PolyFp) -> PolyFp {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn reduce_signed(&self, coeffs: &[i64]) -> PolyFp {
        let p = self.p as i64;
        self.trim(coeffs.iter().map(|&c| c.rem_euclid(p) as u64).collect())
    }

    pub fn deg(a: &PolyFp) -> Option<usize> {
        if a.is_empty() {
            None
        } else {
            Some(a.len() - 1)
        }
    }

    pub fn add(&self, a: &PolyFp, b: &PolyFp) -> PolyFp {
        let n = a.len().max(b.len());
        let r = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + y) % self.p
            })
            .collect();
        self.trim(r)
    }

    pub fn sub(&self, a: &PolyFp, b: &PolyFp) -> PolyFp {
        let n = a.len().max(b.len());
        let r = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + self.p - y) % self.p
            })
            .collect();
        self.trim(r)
    }

    pub fn mul(&self, a: &PolyFp, b: &PolyFp) -> PolyFp {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut r = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + mul_mod(x, y, self.p)) % self.p;
            }
        }
        self.trim(r)
    }

    pub fn scale(&self, a: &PolyFp, c: u64) -> PolyFp {
        self.trim(a.iter().map(|&x| mul_mod(x, c, self.p)).collect())
    }

    pub fn monic(&self, a: &PolyFp) -> PolyFp {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => self.scale(a, inv_mod(lc, self.p)),
        }
    }

    /// Division with remainder by a nonzero divisor.
    pub fn divrem(&self, a: &PolyFp, b: &PolyFp) -> (PolyFp, PolyFp) {
        assert!(!b.is_empty(), "division by zero polynomial");
        let mut r = a.clone();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let db = b.len() - 1;
        let inv = inv_mod(*b.last().unwrap(), self.p);
        let mut q = vec![0u64; r.len() - db];
        for i in (0..q.len()).rev() {
            let c = mul_mod(r[i + db], inv, self.p);
            q[i] = c;
            if c != 0 {
                for (j, &bj) in b.iter().enumerate() {
                    r[i + j] = (r[i + j] + self.p - mul_mod(c, bj, self.p)) % self.p;
                }
            }
        }
        r.truncate(db);
        (self.trim(q), self.trim(r))
    }

    pub fn rem(&self, a: &PolyFp, b: &PolyFp) -> PolyFp {
        self.divrem(a, b).1
    }

    pub fn gcd(&self, a: &PolyFp, b: &PolyFp) -> PolyFp {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    pub fn deriv(&self, a: &PolyFp) -> PolyFp {
        if a.len() <= 1 {
            return Vec::new();
        }
        self.trim(
            (1..a.len())
                .map(|i| mul_mod(a[i], (i as u64) % self.p, self.p))
                .collect(),
        )
    }

    pub fn mulmod(&self, a: &PolyFp, b: &PolyFp, m: &PolyFp) -> PolyFp {
        self.rem(&self.mul(a, b), m)
    }

    pub fn powmod(&self, a: &PolyFp, mut e: u128, m: &PolyFp) -> PolyFp {
        let mut result: PolyFp = self.rem(&vec![1], m);
        let mut base = self.rem(a, m);
        while e > 0 {
            if e & 1 == 1 {
                result = self.mulmod(&result, &base, m);
            }
            base = self.mulmod(&base, &base, m);
            e >>= 1;
        }
        result
    }

    pub fn eval(&self, a: &PolyFp, x: u64) -> u64 {
        let mut r = 0u64;
        for &c in a.iter().rev() {
            r = (mul_mod(r, x, self.p) + c) % self.p;
        }
        r
    }

    fn is_one(a: &PolyFp) -> bool {
        a.len() == 1 && a[0] == 1
    }

    /// Square-free decomposition of a monic polynomial: pairs (g, k) with g
    /// square-free and f = prod g^k.
    pub fn squarefree(&self, f: &PolyFp) -> Vec<(PolyFp, u32)> {
        let f = self.monic(f);
        let mut out = Vec::new();
        if f.len() <= 1 {
            return out;
        }
        let df = self.deriv(&f);
        let (mut w, mut c) = if df.is_empty() {
            (vec![1u64], f.clone())
        } else {
            let c = self.gcd(&f, &df);
            (self.divrem(&f, &c).0, c)
        };
        let mut i = 1u32;
        while !Self::is_one(&w) {
            let y = self.gcd(&w, &c);
            let z = self.divrem(&w, &y).0;
            if !Self::is_one(&z) {
                out.push((self.monic(&z), i));
            }
            i += 1;
            w = y;
            c = self.divrem(&c, &w).0;
        }
        if !Self::is_one(&c) && c.len() > 1 {
            // c is a p-th power: take the p-th root coefficient-wise.
            let p = self.p as usize;
            let root: PolyFp = (0..c.len()).step_by(p).map(|i| c[i]).collect();
            for (g, k) in self.squarefree(&root) {
                out.push((g, k * self.p as u32));
            }
        }
        out
    }

    /// Distinct-degree factorization of a square-free monic polynomial.
    pub fn distinct_degree(&self, f: &PolyFp) -> Vec<(PolyFp, usize)> {
        let mut out = Vec::new();
        let mut f = self.monic(f);
        let x: PolyFp = vec![0, 1];
        let mut h = self.rem(&x, &f);
        let mut i = 0;
        while f.len() > 1 {
            i += 1;
            if 2 * i > f.len() - 1 {
                out.push((f.clone(), f.len() - 1));
                break;
            }
            h = self.powmod(&h, self.p as u128, &f);
            let g = self.gcd(&self.sub(&h, &x), &f);
            if !Self::is_one(&g) {
                out.push((g.clone(), i));
                f = self.divrem(&f, &g).0;
                h = self.rem(&h, &f);
            }
        }
        out
    }

    /// Splits a product of distinct irreducibles of degree `d` into its
    /// factors.
    pub fn equal_degree(&self, f: &PolyFp, d: usize, rng: &mut ChaCha8Rng) -> Vec<PolyFp> {
        let n = f.len() - 1;
        if n == d {
            return vec![self.monic(f)];
        }
        loop {
            let a: PolyFp = self.trim((0..n).map(|_| rng.gen_range(0..self.p)).collect());
            if a.len() <= 1 {
                continue;
            }
            let b = if self.p == 2 {
                // Trace map from F_{2^d} to F_2.
                let mut t = a.clone();
                let mut s = a.clone();
                for _ in 1..d {
                    t = self.mulmod(&t, &t, f);
                    s = self.add(&s, &t);
                }
                s
            } else {
                let q = (self.p as u128).pow(d as u32);
                let e = (q - 1) / 2;
                self.sub(&self.powmod(&a, e, f), &vec![1])
            };
            let g = self.gcd(&b, f);
            if g.len() > 1 && g.len() < f.len() {
                let h = self.divrem(f, &g).0;
                let mut out = self.equal_degree(&g, d, rng);
                out.extend(self.equal_degree(&h, d, rng));
                return out;
            }
        }
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// sorted by (degree, coefficients).
    pub fn factor(&self, f: &PolyFp) -> Vec<(PolyFp, u32)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.p ^ 0x5eed);
        let mut out = Vec::new();
        for (g, k) in self.squarefree(f) {
            for (h, d) in self.distinct_degree(&g) {
                for irr in self.equal_degree(&h, d, &mut rng) {
                    out.push((irr, k));
                }
            }
        }
        out.sort_by(|a, b| {
            (a.0.len(), a.0.iter().rev().collect::<Vec<_>>())
                .cmp(&(b.0.len(), b.0.iter().rev().collect::<Vec<_>>()))
        });
        out
    }

    /// Rabin-style irreducibility test.
    pub fn is_irreducible(&self, f: &PolyFp) -> bool {
        let f = self.monic(f);
        if f.len() <= 1 {
            return false;
        }
        let fac = self.factor(&f);
        fac.len() == 1 && fac[0].1 == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(fp: &Fp, fac: &[(PolyFp, u32)]) -> PolyFp {
        let mut r = vec![1u64];
        for (g, k) in fac {
            for _ in 0..*k {
                r = fp.mul(&r, g);
            }
        }
        r
    }

    #[test]
    fn factors_multiply_back() {
        for p in [2u64, 3, 5, 7, 11, 101] {
            let fp = Fp::new(p);
            for coeffs in [
                vec![1i64, 0, 1],
                vec![1, 1, 1],
                vec![-2, 0, 0, 1],
                vec![1, 0, 0, 0, 1],
                vec![4, 4, 1],
                vec![1, 0, 0, 0, 0, 0, 0, 0, 1],
            ] {
                let f = fp.reduce_signed(&coeffs);
                let fac = fp.factor(&f);
                assert_eq!(expand(&fp, &fac), fp.monic(&f), "p={p} f={coeffs:?}");
                for (g, _) in &fac {
                    // every factor has no roots unless linear
                    if g.len() > 2 {
                        assert!((0..p.min(200)).all(|x| fp.eval(g, x) != 0));
                    }
                }
            }
        }
    }

    #[test]
    fn splitting_of_x2_plus_1() {
        let f = |p| Fp::new(p).factor(&Fp::new(p).reduce_signed(&[1, 0, 1]));
        assert_eq!(f(5).len(), 2);
        assert_eq!(f(3).len(), 1);
        assert_eq!(f(3)[0].0.len(), 3);
        let two = f(2);
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].1, 2);
    }
}
