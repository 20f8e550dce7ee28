//! Smith normal form over `Z/p^d`.
//!
//! Elimination pivots on an entry of minimal `p`-adic valuation in the
//! remaining block. Only row operations are applied to the rows below the
//! pivot; the pivot row itself is dropped since column operations would
//! clear it without touching anything else.

use super::LinalgError;
use crate::groups::prime_power;

/// Largest supported `p^d`; products of two residues must fit in a `u64`.
pub const MAX_MODULUS: u64 = 1 << 32;

fn valuation(mut x: u64, p: u64, d: u32) -> u32 {
    if x == 0 {
        return d;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "{a} is not a unit mod {m}");
    t.rem_euclid(m as i128) as u64
}

/// Locates an entry of minimal valuation in rows `k..rows`, columns `k..cols`.
fn find_pivot<T: Copy + Into<u64>>(data: &[T], rows: usize, cols: usize, k: usize, p: u64, d: u32) -> Option<(usize, usize, u32)> {
    let mut best: Option<(usize, usize, u32)> = None;
    for i in k..rows {
        let row = &data[i * cols..(i + 1) * cols];
        for (j, &x) in row.iter().enumerate().skip(k) {
            let x: u64 = x.into();
            if x == 0 {
                continue;
            }
            let v = if p == 2 { x.trailing_zeros() } else { valuation(x, p, d) };
            if best.map_or(true, |b| v < b.2) {
                best = Some((i, j, v));
                if v == 0 {
                    return best;
                }
            }
        }
    }
    best
}

fn swap_rows<T>(data: &mut [T], cols: usize, a: usize, b: usize) {
    if a == b {
        return;
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let (head, tail) = data.split_at_mut(hi * cols);
    head[lo * cols..(lo + 1) * cols].swap_with_slice(&mut tail[..cols]);
}

fn swap_cols<T>(data: &mut [T], rows: usize, cols: usize, from_row: usize, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in from_row..rows {
        data.swap(i * cols + a, i * cols + b);
    }
}

/// Exponents of the elementary divisors over `Z/2^d`, `d ≤ 32`, in `u32`
/// wrapping arithmetic.
fn exponents_pow2(mut data: Vec<u32>, rows: usize, cols: usize, d: u32) -> Vec<u32> {
    let mask: u32 = if d == 32 { u32::MAX } else { (1u32 << d) - 1 };
    let r = rows.min(cols);
    let mut out = Vec::with_capacity(r);
    for k in 0..r {
        let Some((pi, pj, v)) = find_pivot(&data, rows, cols, k, 2, d) else {
            out.resize(r, d);
            break;
        };
        swap_rows(&mut data, cols, k, pi);
        swap_cols(&mut data, rows, cols, k, k, pj);
        out.push(v);
        let unit = (data[k * cols + k] >> v) as u64;
        let inv = inverse_mod(unit, 1u64 << d.min(32)) as u32;
        let (head, tail) = data.split_at_mut((k + 1) * cols);
        let pivot_row = &head[k * cols + k + 1..(k + 1) * cols];
        for row in tail.chunks_exact_mut(cols) {
            let x = row[k];
            if x == 0 {
                continue;
            }
            let f = (x >> v).wrapping_mul(inv);
            row[k] = 0;
            for (a, &b) in row[k + 1..].iter_mut().zip(pivot_row) {
                *a = a.wrapping_sub(f.wrapping_mul(b)) & mask;
            }
        }
    }
    out
}

fn exponents_general(mut data: Vec<u64>, rows: usize, cols: usize, p: u64, d: u32) -> Vec<u32> {
    let m = p.pow(d);
    let r = rows.min(cols);
    let mut out = Vec::with_capacity(r);
    for k in 0..r {
        let Some((pi, pj, v)) = find_pivot(&data, rows, cols, k, p, d) else {
            out.resize(r, d);
            break;
        };
        swap_rows(&mut data, cols, k, pi);
        swap_cols(&mut data, rows, cols, k, k, pj);
        out.push(v);
        let pv = p.pow(v);
        let inv = inverse_mod(data[k * cols + k] / pv, m);
        let (head, tail) = data.split_at_mut((k + 1) * cols);
        let pivot_row = &head[k * cols + k + 1..(k + 1) * cols];
        for row in tail.chunks_exact_mut(cols) {
            let x = row[k];
            if x == 0 {
                continue;
            }
            let f = (x / pv) * inv % m;
            let neg = m - f;
            row[k] = 0;
            for (a, &b) in row[k + 1..].iter_mut().zip(pivot_row) {
                *a = (*a + neg * b) % m;
            }
        }
    }
    out
}

/// Valuations of the diagonal of a Smith form of a `rows × cols` matrix
/// over `Z/p^d`, sorted increasingly; a zero diagonal entry reports `d`.
///
/// Entries must already be reduced mod `p^d`.
pub(crate) fn elementary_exponents(data: Vec<u64>, rows: usize, cols: usize, p: u64, d: u32) -> Vec<u32> {
    debug_assert_eq!(data.len(), rows * cols);
    let mut out = if p == 2 && d <= 32 {
        exponents_pow2(data.into_iter().map(|x| x as u32).collect(), rows, cols, d)
    } else {
        exponents_general(data, rows, cols, p, d)
    };
    out.sort_unstable();
    out
}

/// Smith normal form of a square matrix over `Z/m` with `m = p^d`, as the
/// exponents `v_1 ≤ ⋯ ≤ v_n` of the diagonal `p^{v_i}`, capped at `d`.
pub fn smith_normal_form(a: &super::ModMatrix) -> Result<Vec<u32>, LinalgError> {
    let m = a.modulus();
    let (p, d) = prime_power(m).ok_or(LinalgError::NotPrimePower(m))?;
    if m > MAX_MODULUS {
        return Err(LinalgError::ModulusTooLarge(m));
    }
    Ok(elementary_exponents(a.entries().to_vec(), a.n(), a.n(), p, d))
}

/// Exponents `a_i` of the Smith form of `a` reduced mod `p^d`.
pub fn smith_exponents(a: &super::ModMatrix, p: u64, d: u32) -> Result<Vec<u32>, LinalgError> {
    let m = checked_level(p, d)?;
    if a.modulus() % m != 0 {
        return Err(LinalgError::ModulusMismatch {
            matrix: a.modulus(),
            requested: m,
        });
    }
    let data = if a.modulus() == m {
        a.entries().to_vec()
    } else {
        a.entries().iter().map(|&x| x % m).collect()
    };
    Ok(elementary_exponents(data, a.n(), a.n(), p, d))
}

pub(crate) fn checked_level(p: u64, d: u32) -> Result<u64, LinalgError> {
    if !crate::groups::is_prime(p) {
        return Err(LinalgError::NotPrimePower(p));
    }
    if d == 0 {
        return Err(LinalgError::InvalidModulus(1));
    }
    match p.checked_pow(d) {
        Some(m) if m <= MAX_MODULUS => Ok(m),
        _ => Err(LinalgError::ModulusTooLarge(p.saturating_pow(d))),
    }
}
