use alloc::vec::Vec;

use super::ring::FiniteRing;

/// A 2×2 matrix with entries encoded in a [`FiniteRing`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1, b: 0, c: 0, d: 1 };

    pub const fn new(a: u64, b: u64, c: u64, d: u64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub const fn diag(x: u64, y: u64) -> Self {
        Mat2 { a: x, b: 0, c: 0, d: y }
    }

    /// Rows of signed integers reduced into the ring.
    pub fn from_i64(ring: &FiniteRing, rows: [[i64; 2]; 2]) -> Self {
        Mat2 {
            a: ring.from_i64(rows[0][0]),
            b: ring.from_i64(rows[0][1]),
            c: ring.from_i64(rows[1][0]),
            d: ring.from_i64(rows[1][1]),
        }
    }

    pub fn entries(&self) -> [u64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn is_scalar(&self) -> bool {
        self.b == 0 && self.c == 0 && self.a == self.d
    }
}

impl FiniteRing {
    pub fn mat_mul(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        Mat2 {
            a: self.add(self.mul(x.a, y.a), self.mul(x.b, y.c)),
            b: self.add(self.mul(x.a, y.b), self.mul(x.b, y.d)),
            c: self.add(self.mul(x.c, y.a), self.mul(x.d, y.c)),
            d: self.add(self.mul(x.c, y.b), self.mul(x.d, y.d)),
        }
    }

    pub fn mat_det(&self, x: &Mat2) -> u64 {
        self.sub(self.mul(x.a, x.d), self.mul(x.b, x.c))
    }

    pub fn mat_trace(&self, x: &Mat2) -> u64 {
        self.add(x.a, x.d)
    }

    pub fn mat_inv(&self, x: &Mat2) -> Option<Mat2> {
        let di = self.inv(self.mat_det(x))?;
        Some(Mat2 {
            a: self.mul(x.d, di),
            b: self.mul(self.neg(x.b), di),
            c: self.mul(self.neg(x.c), di),
            d: self.mul(x.a, di),
        })
    }

    pub fn mat_neg(&self, x: &Mat2) -> Mat2 {
        Mat2 { a: self.neg(x.a), b: self.neg(x.b), c: self.neg(x.c), d: self.neg(x.d) }
    }

    pub fn mat_scale(&self, s: u64, x: &Mat2) -> Mat2 {
        Mat2 { a: self.mul(s, x.a), b: self.mul(s, x.b), c: self.mul(s, x.c), d: self.mul(s, x.d) }
    }

    pub fn mat_pow(&self, x: &Mat2, mut e: u64) -> Mat2 {
        let mut acc = Mat2::IDENTITY;
        let mut base = *x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mat_mul(&acc, &base);
            }
            base = self.mat_mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn mat_in_ring(&self, x: &Mat2) -> bool {
        x.entries().iter().all(|&e| e < self.size())
    }

    /// Entrywise Frobenius `x ↦ x^(p^i)`.
    pub fn mat_frobenius(&self, x: &Mat2, i: u32) -> Mat2 {
        Mat2 {
            a: self.frobenius(x.a, i),
            b: self.frobenius(x.b, i),
            c: self.frobenius(x.c, i),
            d: self.frobenius(x.d, i),
        }
    }

    /// Entrywise reduction to the residue field.
    pub fn mat_reduce(&self, x: &Mat2) -> Mat2 {
        Mat2 {
            a: self.reduce_to_residue(x.a),
            b: self.reduce_to_residue(x.b),
            c: self.reduce_to_residue(x.c),
            d: self.reduce_to_residue(x.d),
        }
    }

    /// The PSL₂ representative: the lexicographically smaller of `x` and `−x`.
    pub fn psl2_canonical(&self, x: &Mat2) -> Mat2 {
        let n = self.mat_neg(x);
        if n < *x {
            n
        } else {
            *x
        }
    }

    /// Every matrix of `GL₂` over this ring, in code order.
    pub fn gl2_elements(&self) -> Vec<Mat2> {
        let q = self.size();
        let mut out = Vec::new();
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    for d in 0..q {
                        let m = Mat2 { a, b, c, d };
                        if self.is_unit(self.mat_det(&m)) {
                            out.push(m);
                        }
                    }
                }
            }
        }
        out
    }

    /// Every matrix of `SL₂` over a field, enumerated by solving for the last entry.
    pub fn sl2_elements(&self) -> Vec<Mat2> {
        let q = self.size();
        let mut out = Vec::new();
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    // ad - bc = 1
                    let rhs = self.add(1, self.mul(b, c));
                    if let Some(ai) = self.inv(a) {
                        out.push(Mat2 { a, b, c, d: self.mul(rhs, ai) });
                    } else if a % self.p() == 0 {
                        if self.is_field() {
                            if rhs == 0 {
                                for d in 0..q {
                                    out.push(Mat2 { a, b, c, d });
                                }
                            }
                        } else {
                            for d in 0..q {
                                let m = Mat2 { a, b, c, d };
                                if self.mat_det(&m) == 1 {
                                    out.push(m);
                                }
                            }
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_counts() {
        let f5 = FiniteRing::prime_field(5).unwrap();
        assert_eq!(f5.sl2_elements().len(), 120);
        assert_eq!(f5.gl2_elements().len(), 480);
        let f4 = FiniteRing::field(2, 2).unwrap();
        assert_eq!(f4.sl2_elements().len(), 60);
        let z9 = FiniteRing::residue(3, 2).unwrap();
        assert_eq!(z9.sl2_elements().len(), 27 * 24);
    }

    #[test]
    fn inverse_and_power() {
        let r = FiniteRing::residue(5, 2).unwrap();
        let m = Mat2::from_i64(&r, [[2, 3], [7, 11]]);
        let inv = r.mat_inv(&m).unwrap();
        assert_eq!(r.mat_mul(&m, &inv), Mat2::IDENTITY);
        let u = Mat2::new(1, 1, 0, 1);
        assert_eq!(r.mat_pow(&u, 25), Mat2::IDENTITY);
        assert_ne!(r.mat_pow(&u, 5), Mat2::IDENTITY);
    }
}
