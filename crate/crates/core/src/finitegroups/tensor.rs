use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::mat2::Mat2;
use super::ring::{FiniteRing, RingKind};
use super::GroupError;

/// Rank and Smith data of `a ⊗ b − 1` acting on a free module of rank 4.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorCertificate {
    pub matrix: [[u64; 4]; 4],
    pub residue_rank: usize,
    /// Valuations of the invariant factors, `None` for a zero factor.
    pub local_profile: Vec<Option<u32>>,
    /// Three unit invariant factors and one zero factor.
    pub free_rank_one: bool,
}

/// `a ⊗ b − 1` with rows/columns indexed by `(i, k) ↦ 2i + k`.
pub fn kronecker_minus_identity(ring: &FiniteRing, a: &Mat2, b: &Mat2) -> [[u64; 4]; 4] {
    let am = [[a.a, a.b], [a.c, a.d]];
    let bm = [[b.a, b.b], [b.c, b.d]];
    let mut out = [[0u64; 4]; 4];
    for i in 0..2 {
        for k in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    let mut v = ring.mul(am[i][j], bm[k][l]);
                    if 2 * i + k == 2 * j + l {
                        v = ring.sub(v, 1);
                    }
                    out[2 * i + k][2 * j + l] = v;
                }
            }
        }
    }
    out
}

fn common_ring(ra: &FiniteRing, rb: &FiniteRing) -> Result<FiniteRing, GroupError> {
    if ra.p() != rb.p() {
        return Err(GroupError::MixedCharacteristic);
    }
    if ra == rb {
        return Ok(ra.clone());
    }
    match (ra.kind(), rb.kind()) {
        (RingKind::Residue { n: m }, RingKind::Residue { n }) => FiniteRing::residue(ra.p(), *m.min(n)),
        (RingKind::Residue { n: 1 }, RingKind::Field { .. }) => Ok(rb.clone()),
        (RingKind::Field { .. }, RingKind::Residue { n: 1 }) => Ok(ra.clone()),
        _ => Err(GroupError::RingMismatch),
    }
}

fn transport(from: &FiniteRing, to: &FiniteRing, m: &Mat2) -> Mat2 {
    if from == to {
        return *m;
    }
    // prime-field constants embed as themselves; residue rings reduce
    let f = |x: u64| x % to.size().min(from.size());
    let f = |x: u64| if to.is_field() && !from.is_field() { x % to.p() } else { f(x) };
    Mat2::new(f(m.a), f(m.b), f(m.c), f(m.d))
}

/// Certificate for `a ⊗ b − 1`; `a` and `b` may live over different rings of
/// the same characteristic when one embeds in the other.
pub fn tensor_coker_certificate(
    ra: &FiniteRing,
    a: &Mat2,
    rb: &FiniteRing,
    b: &Mat2,
) -> Result<TensorCertificate, GroupError> {
    let ring = common_ring(ra, rb)?;
    let a = transport(ra, &ring, a);
    let b = transport(rb, &ring, b);
    let matrix = kronecker_minus_identity(&ring, &a, &b);
    let rows: Vec<Vec<u64>> = matrix.iter().map(|r| r.to_vec()).collect();
    let residue = ring.residue_field();
    let reduced: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| ring.reduce_to_residue(x)).collect()).collect();
    let residue_rank = rank_over_field(&residue, reduced);
    let local_profile = local_smith_profile(&ring, rows);
    let units = local_profile.iter().filter(|v| **v == Some(0)).count();
    let zeros = local_profile.iter().filter(|v| v.is_none()).count();
    Ok(TensorCertificate { matrix, residue_rank, free_rank_one: units == 3 && zeros == 1, local_profile })
}

/// Rank of a matrix over a finite field.
pub fn rank_over_field(ring: &FiniteRing, mut rows: Vec<Vec<u64>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = ring.inv(rows[rank][col]).expect("field");
        for j in 0..ncols {
            rows[rank][j] = ring.mul(rows[rank][j], inv);
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0 {
                let c = rows[i][col];
                for j in 0..ncols {
                    let v = ring.mul(c, rows[rank][j]);
                    rows[i][j] = ring.sub(rows[i][j], v);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Smith profile over `Z/p^n` or a finite field: the valuation of each
/// invariant factor, `None` where the factor is zero. Length = number of rows.
pub fn local_smith_profile(ring: &FiniteRing, mut m: Vec<Vec<u64>>) -> Vec<Option<u32>> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let p = ring.p();
    let mut profile = Vec::with_capacity(nrows);
    for k in 0..nrows.min(ncols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(k) {
            for (j, &x) in row.iter().enumerate().skip(k) {
                if let Some(v) = ring.valuation(x) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else {
            break;
        };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        let pv = if ring.is_field() { 1 } else { p.pow(v) };
        // pivot = p^v * u with u a unit
        let u = if ring.is_field() { m[k][k] } else { m[k][k] / pv };
        let ui = ring.inv(u).expect("unit part");
        for j in 0..ncols {
            m[k][j] = ring.mul(m[k][j], ui);
        }
        for i in 0..nrows {
            if i != k && m[i][k] != 0 {
                let w = if ring.is_field() { m[i][k] } else { m[i][k] / pv };
                for j in 0..ncols {
                    let t = ring.mul(w, m[k][j]);
                    m[i][j] = ring.sub(m[i][j], t);
                }
            }
        }
        for j in 0..ncols {
            if j != k && m[k][j] != 0 {
                let w = if ring.is_field() { m[k][j] } else { m[k][j] / pv };
                for row in m.iter_mut() {
                    let t = ring.mul(w, row[k]);
                    row[j] = ring.sub(row[j], t);
                }
            }
        }
        profile.push(Some(v));
    }
    while profile.len() < nrows {
        profile.push(None);
    }
    profile
}

/// Invariant factors of an integer matrix (nonnegative, each dividing the
/// next, zeros last); length = min(rows, cols).
pub fn integer_smith_normal_form(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let n = nrows.min(ncols);
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        loop {
            // smallest nonzero entry in the remaining block
            let mut best: Option<(usize, usize)> = None;
            for i in k..nrows {
                for j in k..ncols {
                    if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                while diag.len() < n {
                    diag.push(BigInt::zero());
                }
                return diag;
            };
            m.swap(k, pi);
            for row in m.iter_mut() {
                row.swap(k, pj);
            }
            let piv = m[k][k].clone();
            let mut clean = true;
            for i in k + 1..nrows {
                let q = m[i][k].div_floor(&piv);
                if !q.is_zero() {
                    for j in k..ncols {
                        let t = &q * &m[k][j];
                        m[i][j] -= t;
                    }
                }
                if !m[i][k].is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..ncols {
                let q = m[k][j].div_floor(&piv);
                if !q.is_zero() {
                    for row in m.iter_mut().skip(k) {
                        let t = &q * &row[k];
                        row[j] -= t;
                    }
                }
                if !m[k][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // pivot must divide the rest of the block
            let bad = (k + 1..nrows)
                .flat_map(|i| (k + 1..ncols).map(move |j| (i, j)))
                .find(|&(i, j)| !m[i][j].is_multiple_of(&piv));
            match bad {
                Some((i, _)) => {
                    for j in k..ncols {
                        let t = m[i][j].clone();
                        m[k][j] += t;
                    }
                }
                None => {
                    diag.push(piv.abs());
                    break;
                }
            }
        }
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn to_int(m: &[[u64; 4]; 4], size: u64) -> Vec<Vec<BigInt>> {
        m.iter()
            .map(|r| {
                r.iter()
                    .map(|&x| {
                        let x = x as i64;
                        BigInt::from(if x > size as i64 / 2 { x - size as i64 } else { x })
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn identity_and_witness_over_f7() {
        let f7 = FiniteRing::prime_field(7).unwrap();
        let id = tensor_coker_certificate(&f7, &Mat2::IDENTITY, &f7, &Mat2::IDENTITY).unwrap();
        assert_eq!(id.residue_rank, 0);
        let a = Mat2::from_i64(&f7, [[1, 1], [0, 1]]);
        let b = Mat2::from_i64(&f7, [[1, 0], [0, -1]]);
        let c = tensor_coker_certificate(&f7, &a, &f7, &b).unwrap();
        assert_eq!(c.residue_rank, 3);
        assert!(c.free_rank_one);
        let d = tensor_coker_certificate(&f7, &Mat2::diag(2, 4), &f7, &Mat2::diag(4, 2)).unwrap();
        assert!(d.residue_rank < 3);
    }

    #[test]
    fn integer_snf_of_the_unipotent_witness() {
        let f7 = FiniteRing::prime_field(7).unwrap();
        let a = Mat2::from_i64(&f7, [[1, 1], [0, 1]]);
        let b = Mat2::from_i64(&f7, [[1, 0], [0, -1]]);
        let m = kronecker_minus_identity(&f7, &a, &b);
        let snf = integer_smith_normal_form(to_int(&m, 7));
        // over Z the last nonzero factor is 4, a unit at every odd prime
        assert_eq!(snf, [1, 1, 4, 0].map(BigInt::from));
    }

    #[test]
    fn local_profile_over_z25() {
        let z25 = FiniteRing::residue(5, 2).unwrap();
        let m = vec![vec![5, 0], vec![0, 0]];
        assert_eq!(local_smith_profile(&z25, m), vec![Some(1), None]);
        let m = vec![vec![10, 3], vec![5, 1]];
        // det = 10 - 15 = -5
        assert_eq!(local_smith_profile(&z25, m), vec![Some(0), Some(1)]);
    }
}
