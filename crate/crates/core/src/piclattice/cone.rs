use super::{to_rat, PicError, PicardLattice};
use crate::arith::Rat;
use crate::linalg::{det_rat, kernel_rat, primitive_integer, rank_rat};
use crate::lp::{feasible, maximize, minimize, LpOutcome};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dot_i(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Whether `v` is a nonnegative rational combination of the generators.
pub fn in_cone(lat: &PicardLattice, v: &[i64]) -> bool {
    feasible(&lat.gen_columns(), &to_rat(v))
}

/// `a(L) = min { r : rL + K in Eff }`, by exact linear programming.
pub fn a_invariant(lat: &PicardLattice, l: &[i64]) -> Result<Rat, PicError> {
    if l.len() != lat.rank {
        return Err(PicError::InvalidLattice("L has the wrong length".into()));
    }
    if l.iter().all(|&x| x == 0) {
        return Err(PicError::NotBig);
    }
    let k = lat.eff_generators.len();
    // Variables: lambda_1..lambda_k, r+, r-;  G lambda - (r+ - r-) L = K.
    let mut a = lat.gen_columns();
    for (i, row) in a.iter_mut().enumerate() {
        row.push(Rat::from_integer((-l[i]).into()));
        row.push(Rat::from_integer(l[i].into()));
    }
    let mut c = vec![Rat::zero(); k + 2];
    c[k] = Rat::from_integer(1.into());
    c[k + 1] = Rat::from_integer((-1).into());
    match minimize(&c, &a, &to_rat(&lat.canonical)) {
        LpOutcome::Optimal { value, .. } => Ok(value),
        LpOutcome::Infeasible | LpOutcome::Unbounded => Err(PicError::NotBig),
    }
}

/// Indices of the generators spanning the minimal face containing `p`.
fn minimal_face(lat: &PicardLattice, p: &[Rat]) -> Vec<usize> {
    let k = lat.eff_generators.len();
    let a = lat.gen_columns();
    (0..k)
        .filter(|&j| {
            let mut c = vec![Rat::zero(); k];
            c[j] = Rat::from_integer(1.into());
            match maximize(&c, &a, p) {
                LpOutcome::Optimal { value, .. } => value.is_positive(),
                LpOutcome::Unbounded => true,
                LpOutcome::Infeasible => false,
            }
        })
        .collect()
}

/// `b(L)`: codimension of the minimal face of `Eff` containing `a(L) L + K`.
pub fn b_invariant(lat: &PicardLattice, l: &[i64]) -> Result<usize, PicError> {
    let a = a_invariant(lat, l)?;
    let p: Vec<Rat> = l
        .iter()
        .zip(&lat.canonical)
        .map(|(&li, &ki)| &a * Rat::from_integer(li.into()) + Rat::from_integer(ki.into()))
        .collect();
    let face = minimal_face(lat, &p);
    let span: Vec<Vec<Rat>> = face
        .iter()
        .map(|&j| to_rat(&lat.eff_generators[j]))
        .collect();
    let dim = if span.is_empty() { 0 } else { rank_rat(&span) };
    if dim == lat.rank {
        return Err(PicError::NotOnBoundary);
    }
    Ok(lat.rank - dim)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Facets of the pointed cone spanned by `rays`, inside its own span: each
/// entry is a functional nonnegative on the cone and the indices of the rays
/// on which it vanishes.
fn facets_in_span(rays: &[Vec<Rat>], idx: &[usize]) -> Vec<(Vec<Rat>, Vec<usize>)> {
    let s: Vec<Vec<Rat>> = idx.iter().map(|&i| rays[i].clone()).collect();
    if s.is_empty() {
        return Vec::new();
    }
    let dim = s[0].len();
    let k = rank_rat(&s);
    if k == 1 {
        return vec![(s[0].clone(), Vec::new())];
    }
    let mut out: Vec<(Vec<Rat>, Vec<usize>)> = Vec::new();
    for t in combinations(s.len(), k - 1) {
        let trows: Vec<Vec<Rat>> = t.iter().map(|&i| s[i].clone()).collect();
        if rank_rat(&trows) != k - 1 {
            continue;
        }
        let ker = kernel_rat(&trows, dim);
        let Some(mut n) = ker
            .into_iter()
            .find(|b| s.iter().any(|v| !dot(b, v).is_zero()))
        else {
            continue;
        };
        let vals: Vec<Rat> = s.iter().map(|v| dot(&n, v)).collect();
        if vals.iter().all(|x| !x.is_positive()) {
            n = n.iter().map(|x| -x).collect();
        } else if !vals.iter().all(|x| !x.is_negative()) {
            continue;
        }
        let on: Vec<usize> = (0..s.len())
            .filter(|&i| vals[i].is_zero())
            .map(|i| idx[i])
            .collect();
        if !out.iter().any(|(_, o)| *o == on) {
            out.push((n, on));
        }
    }
    out
}

/// Primitive inward facet normals of a full-dimensional pointed cone; these
/// are the extremal rays of the dual cone.
pub fn facets(rank: usize, gens: &[Vec<i64>]) -> Result<Vec<Vec<i64>>, PicError> {
    let rays: Vec<Vec<Rat>> = gens.iter().map(|g| to_rat(g)).collect();
    if rays.is_empty() || rank_rat(&rays) != rank {
        return Err(PicError::DegenerateCone(
            "cone is not full-dimensional".into(),
        ));
    }
    let idx: Vec<usize> = (0..rays.len()).collect();
    let mut out: Vec<Vec<i64>> = facets_in_span(&rays, &idx)
        .into_iter()
        .map(|(n, _)| {
            primitive_integer(&n)
                .iter()
                .map(|x| x.to_i64().expect("small normal"))
                .collect()
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// `a(L)` from facet inequalities: `r <L, n> >= -<K, n>` for every facet normal `n`.
pub fn a_invariant_oracle(lat: &PicardLattice, l: &[i64]) -> Result<Rat, PicError> {
    let normals = facets(lat.rank, &lat.eff_generators)?;
    let mut lower: Option<Rat> = None;
    let mut upper: Option<Rat> = None;
    for n in &normals {
        let ln = dot_i(l, n);
        let kn = dot_i(&lat.canonical, n);
        if ln == 0 {
            if kn < 0 {
                return Err(PicError::NotBig);
            }
            continue;
        }
        let bound = Rat::new((-kn).into(), ln.into());
        if ln > 0 {
            lower = Some(lower.map_or(bound.clone(), |x: Rat| x.max(bound)));
        } else {
            upper = Some(upper.map_or(bound.clone(), |x: Rat| x.min(bound)));
        }
    }
    match (lower, upper) {
        (Some(lo), Some(up)) if lo > up => Err(PicError::NotBig),
        (Some(lo), _) => Ok(lo),
        (None, _) => Err(PicError::NotBig),
    }
}

/// `b(L)` from the facets tight at `a(L) L + K`.
pub fn b_invariant_oracle(lat: &PicardLattice, l: &[i64]) -> Result<usize, PicError> {
    let a = a_invariant_oracle(lat, l)?;
    let p: Vec<Rat> = l
        .iter()
        .zip(&lat.canonical)
        .map(|(&li, &ki)| &a * Rat::from_integer(li.into()) + Rat::from_integer(ki.into()))
        .collect();
    let normals = facets(lat.rank, &lat.eff_generators)?;
    let tight: Vec<Vec<Rat>> = normals
        .iter()
        .map(|n| to_rat(n))
        .filter(|n| dot(n, &p).is_zero())
        .collect();
    if tight.is_empty() {
        return Err(PicError::NotOnBoundary);
    }
    let face: Vec<Vec<Rat>> = lat
        .eff_generators
        .iter()
        .map(|g| to_rat(g))
        .filter(|g| tight.iter().all(|n| dot(n, g).is_zero()))
        .collect();
    let dim = if face.is_empty() { 0 } else { rank_rat(&face) };
    Ok(lat.rank - dim)
}

fn triangulate(rays: &[Vec<Rat>], idx: Vec<usize>) -> Vec<Vec<usize>> {
    if idx.is_empty() {
        return vec![Vec::new()];
    }
    let sub: Vec<Vec<Rat>> = idx.iter().map(|&i| rays[i].clone()).collect();
    if rank_rat(&sub) == idx.len() {
        return vec![idx];
    }
    let apex = idx[0];
    let mut out = Vec::new();
    for (_, on) in facets_in_span(rays, &idx) {
        if on.contains(&apex) {
            continue;
        }
        for mut simplex in triangulate(rays, on) {
            simplex.insert(0, apex);
            out.push(simplex);
        }
    }
    out
}

/// Simplicial decomposition of the dual of the effective cone: the rays and
/// the index sets of the simplicial cones.
pub fn triangulate_dual(lat: &PicardLattice) -> Result<(Vec<Vec<i64>>, Vec<Vec<usize>>), PicError> {
    let rays = facets(lat.rank, &lat.eff_generators)?;
    let r: Vec<Vec<Rat>> = rays.iter().map(|v| to_rat(v)).collect();
    let simplices = triangulate(&r, (0..rays.len()).collect());
    Ok((rays, simplices))
}

fn factorial(n: usize) -> Rat {
    Rat::from_integer((1..=n as u64).product::<u64>().into())
}

/// `alpha(X) = 1/(rho-1)! * integral over Eff^dual of exp(-<-K, y>) dy`,
/// exactly, as a sum over a simplicial decomposition of the dual cone.
pub fn alpha_invariant(lat: &PicardLattice) -> Result<Rat, PicError> {
    let (rays, simplices) = triangulate_dual(lat)?;
    let anti = lat.anticanonical();
    let weights: Vec<i64> = rays.iter().map(|r| dot_i(r, &anti)).collect();
    if weights.iter().any(|&w| w <= 0) {
        return Err(PicError::DivergentIntegral);
    }
    let mut total = Rat::zero();
    for s in &simplices {
        let m: Vec<Vec<Rat>> = s.iter().map(|&i| to_rat(&rays[i])).collect();
        let det = det_rat(&m).abs();
        let denom: i64 = s.iter().map(|&i| weights[i]).product();
        total += det / Rat::from_integer(denom.into());
    }
    Ok(total / factorial(lat.rank - 1))
}

/// Seeded Monte Carlo estimate of `alpha` as `rho * vol(P)` with
/// `P = { y in Eff^dual : <-K, y> <= 1 }`; returns (value, standard error).
pub fn alpha_monte_carlo(
    lat: &PicardLattice,
    samples: u64,
    seed: u64,
) -> Result<(f64, f64), PicError> {
    let rays = facets(lat.rank, &lat.eff_generators)?;
    let anti = lat.anticanonical();
    let rho = lat.rank;
    let mut lo = vec![0.0f64; rho];
    let mut hi = vec![0.0f64; rho];
    for r in &rays {
        let w = dot_i(r, &anti);
        if w <= 0 {
            return Err(PicError::DivergentIntegral);
        }
        for i in 0..rho {
            let c = r[i] as f64 / w as f64;
            lo[i] = lo[i].min(c);
            hi[i] = hi[i].max(c);
        }
    }
    let box_vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let gens: Vec<Vec<f64>> = lat
        .eff_generators
        .iter()
        .map(|g| g.iter().map(|&x| x as f64).collect())
        .collect();
    let anti_f: Vec<f64> = anti.iter().map(|&x| x as f64).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    let mut y = vec![0.0; rho];
    for _ in 0..samples {
        for i in 0..rho {
            y[i] = rng.gen_range(lo[i]..=hi[i]);
        }
        let dual = gens
            .iter()
            .all(|g| g.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() >= 0.0);
        let slab = anti_f.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() <= 1.0;
        if dual && slab {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    let value = rho as f64 * box_vol * p;
    let se = rho as f64 * box_vol * (p * (1.0 - p) / samples as f64).sqrt();
    Ok((value, se))
}

/// Any rational point strictly inside the cone (the sum of generators is
/// interior for full-dimensional cones).
pub fn interior_point(lat: &PicardLattice) -> Vec<i64> {
    let mut s = vec![0i64; lat.rank];
    for g in &lat.eff_generators {
        for (a, b) in s.iter_mut().zip(g) {
            *a += b;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_frac, rat_to_f64};

    #[test]
    fn preset_invariants() {
        for n in 1..5 {
            let p = PicardLattice::projective_space(n);
            assert_eq!(a_invariant(&p, &[1]).unwrap(), rat(n as i64 + 1));
            assert_eq!(b_invariant(&p, &[1]).unwrap(), 1);
            assert_eq!(alpha_invariant(&p).unwrap(), rat_frac(1, n as i64 + 1));
        }
        let q = PicardLattice::multiprojective(&[1, 1]);
        assert_eq!(a_invariant(&q, &[1, 1]).unwrap(), rat(2));
        assert_eq!(b_invariant(&q, &[1, 1]).unwrap(), 2);
        assert_eq!(a_invariant(&q, &[1, 2]).unwrap(), rat(2));
        assert_eq!(b_invariant(&q, &[1, 2]).unwrap(), 1);
        assert_eq!(a_invariant(&q, &[0, 0]), Err(PicError::NotBig));
        assert_eq!(alpha_invariant(&q).unwrap(), rat_frac(1, 4));
        let ci = PicardLattice::complete_intersection(5, 1, 2);
        assert_eq!(a_invariant(&ci, &[1]).unwrap(), rat(4));
        let dp6 = PicardLattice::dp6();
        assert_eq!(a_invariant(&dp6, &[3, -1, -1, -1]).unwrap(), rat(1));
        assert_eq!(b_invariant(&dp6, &[3, -1, -1, -1]).unwrap(), 4);
        let one = PicardLattice::new(vec![vec![1]], vec![-1], vec![]).unwrap();
        assert_eq!(alpha_invariant(&one).unwrap(), rat(1));
    }

    #[test]
    fn oracles_and_monte_carlo() {
        let dp6 = PicardLattice::dp6();
        assert_eq!(facets(4, &dp6.eff_generators).unwrap().len(), 5);
        let a = alpha_invariant(&dp6).unwrap();
        let (mc, se) = alpha_monte_carlo(&dp6, 200_000, 7).unwrap();
        assert!((mc - rat_to_f64(&a)).abs() < 4.0 * se, "{a} {mc} {se}");
        let q = PicardLattice::multiprojective(&[1, 2]);
        assert_eq!(a_invariant_oracle(&q, &[1, 1]).unwrap(), rat(3));
        assert_eq!(b_invariant_oracle(&q, &[1, 1]).unwrap(), 1);
        assert_eq!(b_invariant(&q, &[1, 1]).unwrap(), 1);
        let bad = PicardLattice::new(vec![vec![1]], vec![1], vec![]).unwrap();
        assert_eq!(alpha_invariant(&bad), Err(PicError::DivergentIntegral));
    }
}
