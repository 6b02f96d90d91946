//! Small-integer arithmetic helpers: primes, factorization of 64-bit integers,
//! modular exponentiation and exact rational parsing.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number used throughout the crate.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"`, a signed integer or a terminating decimal such as
/// `"2.15"` into an exact rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || int.contains('/') {
            return None;
        }
        let neg = int.starts_with('-');
        let whole: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            d => d.parse().ok()?,
        };
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let r = Rat::new(whole * &scale + frac.parse::<BigInt>().ok()?, scale);
        return Some(if neg { -r } else { r });
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Converts an exact rational to the nearest `f64` without overflowing on
/// large numerators and denominators.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db;
    let scaled = if shift > 0 {
        Rat::new(r.numer().clone(), r.denom() << (shift as usize))
    } else {
        Rat::new(r.numer() << ((-shift) as usize), r.denom().clone())
    };
    let m = scaled.numer().to_f64().unwrap_or(0.0) / scaled.denom().to_f64().unwrap_or(1.0);
    m * 2f64.powi(shift as i32)
}

/// Exact conversion of a finite `f64` to a rational.
pub fn f64_to_rat(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// Floor of a rational as a `BigInt`.
pub fn rat_floor(r: &Rat) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u128, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Inverse of `a` modulo the prime `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, (p - 2) as u128, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d as u128, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes `<= n`, by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(k, _)| k as u64)
        .collect()
}

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization `n = prod p^k`, primes ascending.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    if n <= 1 {
        return out;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
    }
    let mut stack = vec![n];
    let mut primes: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
        } else {
            let d = pollard_rho(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    primes.sort_unstable();
    for p in primes {
        match out.last_mut() {
            Some((q, k)) if *q == p => *k += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// p-adic valuation of a nonzero big integer.
pub fn valuation_bigint(n: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut k = 0;
    if n.is_zero() {
        return u32::MAX;
    }
    while (&n % &p).is_zero() {
        n /= &p;
        k += 1;
    }
    k
}

/// Round-to-nearest division for integers, ties toward +infinity.
pub fn div_round(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    (2 * a + b).div_euclid(2 * b)
}

/// Integer square root (floor).
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_factors() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(factor_u64(360), vec![(2, 3), (3, 2), (5, 1)]);
        let big = 1_000_000_007u64 * 998_244_353u64;
        assert_eq!(factor_u64(big), vec![(998_244_353, 1), (1_000_000_007, 1)]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(561));
    }

    #[test]
    fn rational_parsing_round_trips() {
        let r = parse_rat(" -3/6 ").unwrap();
        assert_eq!(r, rat_frac(-1, 2));
        assert_eq!(format_rat(&r), "-1/2");
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("x").is_none());
        assert_eq!(parse_rat("17").unwrap(), rat(17));
        assert_eq!(parse_rat("2.5").unwrap(), rat_frac(5, 2));
        assert_eq!(parse_rat("-0.125").unwrap(), rat_frac(-1, 8));
        assert!(parse_rat("1.").is_none());
        assert!(parse_rat("1.2.3").is_none());
    }

    #[test]
    fn big_rational_to_float() {
        let huge = Rat::new(BigInt::from(3) << 2000usize, BigInt::from(1) << 2000usize);
        assert!((rat_to_f64(&huge) - 3.0).abs() < 1e-12);
        assert_eq!(isqrt(99), 9);
        assert_eq!(isqrt(100), 10);
        assert_eq!(div_round(7, 2), 4);
        assert_eq!(div_round(-7, 2), -3);
    }
}
