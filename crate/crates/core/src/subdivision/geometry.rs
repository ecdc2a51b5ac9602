//! Exact rational linear algebra for simplices given in barycentric
//! coordinates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Renders `p/q`, or `p` when the denominator is one.
pub fn render(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Row-reduces in place and returns the pivot columns.
fn row_reduce(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    row_reduce(&mut m.to_vec()).len()
}

/// Determinant of a square matrix.
pub fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let delta = &f * &a[c][j];
                    a[i][j] -= delta;
                }
            }
        }
    }
    d
}

/// Volume of the simplex with the given vertices (rows summing to one),
/// as a fraction of the ambient coordinate simplex.
pub fn relative_volume(points: &[Vec<Rational>]) -> Rational {
    det(points).abs()
}

/// Is there `x` with `A x = b` and every `x_i > 0`?
pub fn strictly_positive_solution(a: &[Vec<Rational>], b: &[Rational]) -> bool {
    let nvars = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.contains(&nvars) {
        return false;
    }
    let free: Vec<usize> = (0..nvars).filter(|c| !pivots.contains(c)).collect();
    // each constraint reads  coeffs · y + constant > 0  over the free variables y
    let mut ineqs: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for row in aug.iter().take(pivots.len()) {
        // pivot variable = rhs − Σ row[f] y_f
        let coeffs = free.iter().map(|&f| -row[f].clone()).collect();
        ineqs.push((coeffs, row[nvars].clone()));
    }
    for (i, _) in free.iter().enumerate() {
        let mut coeffs = vec![Rational::zero(); free.len()];
        coeffs[i] = Rational::one();
        ineqs.push((coeffs, Rational::zero()));
    }
    fourier_motzkin_strict(ineqs, free.len())
}

/// Feasibility of a system of strict inequalities by Fourier–Motzkin
/// elimination.
fn fourier_motzkin_strict(mut ineqs: Vec<(Vec<Rational>, Rational)>, nvars: usize) -> bool {
    for v in 0..nvars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for q in ineqs {
            if q.0[v].is_positive() {
                pos.push(q);
            } else if q.0[v].is_negative() {
                neg.push(q);
            } else {
                rest.push(q);
            }
        }
        for (pc, pk) in &pos {
            for (nc, nk) in &neg {
                // scale to ±1 on v and add
                let sp = pc[v].recip();
                let sn = -nc[v].recip();
                let coeffs = pc.iter().zip(nc).map(|(a, b)| a * &sp + b * &sn).collect();
                rest.push((coeffs, pk * &sp + nk * &sn));
            }
        }
        ineqs = rest;
        dedup(&mut ineqs);
    }
    ineqs.iter().all(|(_, k)| k.is_positive())
}

fn dedup(ineqs: &mut Vec<(Vec<Rational>, Rational)>) {
    for q in ineqs.iter_mut() {
        // normalise by the first nonzero coefficient's magnitude
        let Some(s) = q.0.iter().find(|c| !c.is_zero()).map(|c| c.abs()) else {
            continue;
        };
        for c in q.0.iter_mut() {
            *c /= &s;
        }
        q.1 /= &s;
    }
    ineqs.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    ineqs.dedup();
}

/// Whether the relative interiors of `conv(a)` and `conv(b)` meet.
pub fn relative_interiors_meet(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    let dim = a.first().or(b.first()).map_or(0, Vec::len);
    let (na, nb) = (a.len(), b.len());
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    // Σλ = 1, Σμ = 1
    let mut r = vec![Rational::zero(); na + nb];
    r[..na].fill(Rational::one());
    rows.push(r);
    rhs.push(Rational::one());
    let mut r = vec![Rational::zero(); na + nb];
    r[na..].fill(Rational::one());
    rows.push(r);
    rhs.push(Rational::one());
    // Σ λ_i a_i − Σ μ_j b_j = 0
    for c in 0..dim {
        let mut r: Vec<Rational> = a.iter().map(|p| p[c].clone()).collect();
        r.extend(b.iter().map(|p| -p[c].clone()));
        rows.push(r);
        rhs.push(Rational::zero());
    }
    strictly_positive_solution(&rows, &rhs)
}
