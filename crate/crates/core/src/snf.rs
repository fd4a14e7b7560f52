//! Smith normal form of integer matrices and linear congruence systems.

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

/// `u * a * v = diag(d)` with `u`, `v` unimodular and `d[k] | d[k+1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: Vec<Vec<BigInt>>,
    pub d: Vec<BigInt>,
    pub v: Vec<Vec<BigInt>>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|r| (0..n).map(|c| BigInt::from(u8::from(r == c))).collect()).collect()
}

fn row_axpy(m: &mut [Vec<BigInt>], target: usize, q: &BigInt, source: usize) {
    let src = m[source].clone();
    for (x, s) in m[target].iter_mut().zip(&src) {
        *x -= q * s;
    }
}

fn col_axpy(m: &mut [Vec<BigInt>], target: usize, q: &BigInt, source: usize) {
    for row in m.iter_mut() {
        let s = row[source].clone();
        row[target] -= q * s;
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// `a` is `rows x cols`; an empty `a` needs `cols` to size `v`.
pub fn smith_normal_form(a: &[Vec<BigInt>], cols: usize) -> SmithForm {
    let rows = a.len();
    assert!(a.iter().all(|r| r.len() == cols), "ragged integer matrix");
    let mut m = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut d = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let pivot = (t..rows)
                .flat_map(|r| (t..cols).map(move |c| (r, c)))
                .filter(|&(r, c)| !m[r][c].is_zero())
                .min_by(|&(r1, c1), &(r2, c2)| m[r1][c1].abs().cmp(&m[r2][c2].abs()));
            let Some((pr, pc)) = pivot else {
                break;
            };
            m.swap(t, pr);
            u.swap(t, pr);
            swap_cols(&mut m, t, pc);
            swap_cols(&mut v, t, pc);
            let p = m[t][t].clone();
            let mut clean = true;
            for r in t + 1..rows {
                let q = m[r][t].div_floor(&p);
                if !q.is_zero() {
                    row_axpy(&mut m, r, &q, t);
                    row_axpy(&mut u, r, &q, t);
                }
                clean &= m[r][t].is_zero();
            }
            for c in t + 1..cols {
                let q = m[t][c].div_floor(&p);
                if !q.is_zero() {
                    col_axpy(&mut m, c, &q, t);
                    col_axpy(&mut v, c, &q, t);
                }
                clean &= m[t][c].is_zero();
            }
            if !clean {
                continue;
            }
            let stray = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !m[r][c].is_multiple_of(&p)));
            match stray {
                Some(r) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut m, t, &minus_one, r);
                    row_axpy(&mut u, t, &minus_one, r);
                }
                None => break,
            }
        }
        if m[t][t].is_negative() {
            for x in m[t].iter_mut().chain(u[t].iter_mut()) {
                *x = -x.clone();
            }
        }
        d.push(m[t][t].clone());
    }
    SmithForm { u, d, v }
}

fn mat_vec(m: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

/// Some `x` with `a x ≡ c (mod m)`, or exactly `a x = c` when `m = 0`.
/// Entries are reduced into `[0, m)` when `m > 0`.
pub fn solve_congruences(a: &[Vec<BigInt>], cols: usize, c: &[BigInt], m: &BigInt) -> Option<Vec<BigInt>> {
    assert_eq!(a.len(), c.len(), "right-hand side length");
    assert!(!m.is_negative(), "negative modulus");
    let snf = smith_normal_form(a, cols);
    let b = mat_vec(&snf.u, c);
    let mut y = vec![BigInt::zero(); cols];
    for (k, bk) in b.iter().enumerate() {
        let dk = snf.d.get(k).cloned().unwrap_or_default();
        if dk.is_zero() {
            let ok = if m.is_zero() { bk.is_zero() } else { bk.is_multiple_of(m) };
            if !ok {
                return None;
            }
            continue;
        }
        if m.is_zero() {
            if !bk.is_multiple_of(&dk) {
                return None;
            }
            y[k] = bk / &dk;
        } else {
            let g = dk.gcd(m);
            if !bk.is_multiple_of(&g) {
                return None;
            }
            let reduced = m / &g;
            let inv = mod_inverse(&(&dk / &g), &reduced).expect("coprime after dividing by the gcd");
            y[k] = ((bk / &g) * inv).mod_floor(&reduced);
        }
    }
    let mut x = mat_vec(&snf.v, &y);
    if m.is_positive() {
        for xi in x.iter_mut() {
            *xi = xi.mod_floor(m);
        }
    }
    Some(x)
}

/// Inverse of `a` modulo `m > 0`; modulo 1 everything is 0.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let inner = b.len();
        let cols = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|row| (0..cols).map(|c| (0..inner).map(|k| &row[k] * &b[k][c]).sum()).collect())
            .collect()
    }

    fn check_form(a: &[Vec<BigInt>], cols: usize) -> SmithForm {
        let s = smith_normal_form(a, cols);
        let prod = mul(&mul(&s.u, a), &s.v);
        for (r, row) in prod.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                let want = if r == c { s.d[r].clone() } else { BigInt::zero() };
                assert_eq!(*x, want, "entry ({r}, {c})");
            }
        }
        for w in s.d.windows(2) {
            assert!(w[0].is_zero() && w[1].is_zero() || w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn textbook_example() {
        let a = big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = check_form(&a, 3);
        assert_eq!(s.d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn rectangular_and_degenerate() {
        check_form(&big(&[&[2, -1, 0, 0], &[0, 2, -1, 0]]), 4);
        check_form(&big(&[&[0, 0], &[0, 0], &[3, 0]]), 2);
        let s = check_form(&[], 3);
        assert!(s.d.is_empty());
        assert_eq!(s.v.len(), 3);
    }

    #[test]
    fn congruences() {
        // 2x = 1 (mod 4) has no solution, 2x = 2 (mod 4) does
        let a = big(&[&[2]]);
        assert_eq!(solve_congruences(&a, 1, &[BigInt::from(1)], &BigInt::from(4)), None);
        let x = solve_congruences(&a, 1, &[BigInt::from(2)], &BigInt::from(4)).unwrap();
        assert_eq!((&x[0] * BigInt::from(2)).mod_floor(&BigInt::from(4)), BigInt::from(2));
        // over Z: 2x - y = 3, 2y - x = 0 gives x = 2, y = 1
        let a = big(&[&[2, -1], &[-1, 2]]);
        let x = solve_congruences(&a, 2, &[BigInt::from(3), BigInt::zero()], &BigInt::zero()).unwrap();
        assert_eq!(x, vec![BigInt::from(2), BigInt::from(1)]);
        assert_eq!(solve_congruences(&a, 2, &[BigInt::from(1), BigInt::zero()], &BigInt::zero()), None);
    }

    #[test]
    fn brute_force_agreement_mod_six() {
        let m = BigInt::from(6);
        let a = big(&[&[2, -1, 0], &[0, 2, -1], &[-1, 0, 2], &[2, 0, 0]]);
        for code in 0..6i64.pow(4) {
            let c: Vec<BigInt> = (0..4).map(|k| BigInt::from(code / 6i64.pow(k) % 6)).collect();
            let brute = (0..216).any(|v: i64| {
                let x = [v % 6, v / 6 % 6, v / 36];
                a.iter().zip(&c).all(|(row, ck)| {
                    let lhs: BigInt = row.iter().zip(x).map(|(r, xi)| r * xi).sum();
                    (lhs - ck).is_multiple_of(&m)
                })
            });
            let found = solve_congruences(&a, 3, &c, &m);
            assert_eq!(found.is_some(), brute, "rhs {c:?}");
            if let Some(x) = found {
                for (row, ck) in a.iter().zip(&c) {
                    let lhs: BigInt = row.iter().zip(&x).map(|(r, xi)| r * xi).sum();
                    assert!((lhs - ck).is_multiple_of(&m));
                }
            }
        }
    }
}
