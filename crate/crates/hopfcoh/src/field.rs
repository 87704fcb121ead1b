//! Exact scalars: residues modulo a prime, or arbitrary-precision rationals.
//!
//! A [`Field`] is just a characteristic (0 for the rationals, otherwise a prime
//! below `2^31`); a [`Scalar`] carries its field with it. Mixing scalars from
//! different fields is a construction bug, so the arithmetic panics on mismatch
//! instead of returning an error.

use crate::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::Euclid;
use num::{One, Zero};
use std::fmt;

/// An exact coefficient field, determined by its characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    characteristic: u32,
}

impl Field {
    /// A field of the given characteristic: 0 for the rationals, otherwise a
    /// prime below `2^31`.
    pub fn new(characteristic: u32) -> Result<Field> {
        if characteristic == 0 {
            return Ok(Field { characteristic });
        }
        if characteristic >= 1 << 31 || !is_prime(characteristic) {
            return Err(Error::BadCharacteristic(characteristic as u64));
        }
        Ok(Field { characteristic })
    }

    /// The rational numbers.
    pub fn rationals() -> Field {
        Field { characteristic: 0 }
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Field> {
        if p == 0 {
            return Err(Error::BadCharacteristic(0));
        }
        Field::new(p)
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    pub fn is_rational(&self) -> bool {
        self.characteristic == 0
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    /// The scalar `v · 1` in this field.
    pub fn from_i64(&self, v: i64) -> Scalar {
        match self.characteristic {
            0 => Scalar::Rat(Box::new(BigRational::from(BigInt::from(v)))),
            p => {
                let m = v.rem_euclid(p as i64) as u32;
                Scalar::Fp { p, val: m }
            }
        }
    }

    /// Parse a scalar from a string: an optionally signed decimal integer, or
    /// a fraction `a/b`. Over `F_p` a fraction means `a · b^{-1}`.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let (num_str, den_str) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s, None),
        };
        let num: BigInt = num_str
            .parse()
            .map_err(|_| Error::Parse(format!("not an integer: {num_str:?}")))?;
        let den: BigInt = match den_str {
            Some(d) => d
                .parse()
                .map_err(|_| Error::Parse(format!("not an integer: {d:?}")))?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        match self.characteristic {
            0 => Ok(Scalar::Rat(Box::new(BigRational::new(num, den)))),
            p => {
                let pb = BigInt::from(p);
                let n = num.rem_euclid(&pb);
                let d = den.rem_euclid(&pb);
                let n32 = u32::try_from(&n).expect("residue fits in u32");
                let d32 = u32::try_from(&d).expect("residue fits in u32");
                if d32 == 0 {
                    return Err(Error::Parse(format!(
                        "denominator of {s:?} vanishes modulo {p}"
                    )));
                }
                let inv = fp_inv(d32, p);
                Ok(Scalar::Fp {
                    p,
                    val: fp_mul(n32, inv, p),
                })
            }
        }
    }

    /// All field elements, smallest representative first. Only available for
    /// prime fields; enumeration of the rationals is refused.
    pub fn elements(&self) -> Result<Vec<Scalar>> {
        match self.characteristic {
            0 => Err(Error::Invalid(
                "cannot enumerate the elements of the rationals".into(),
            )),
            p => Ok((0..p).map(|val| Scalar::Fp { p, val }).collect()),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.characteristic {
            0 => write!(f, "Q"),
            p => write!(f, "F{p}"),
        }
    }
}

/// One exact field element. Rationals are boxed so that the enum stays small;
/// prime-field elements are plain machine words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Fp { p: u32, val: u32 },
    Rat(Box<BigRational>),
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn fp_add(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + b as u64;
    (s % p as u64) as u32
}

fn fp_sub(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + p as u64 - b as u64;
    (s % p as u64) as u32
}

fn fp_mul(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn fp_pow(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut acc = 1u32 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_mul(acc, a, p);
        }
        a = fp_mul(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue, via Fermat's little theorem.
fn fp_inv(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0, "inverse of zero in F{p}");
    fp_pow(a, p as u64 - 2, p)
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Fp { p, .. } => Field { characteristic: *p },
            Scalar::Rat(_) => Field { characteristic: 0 },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp { val, .. } => *val == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp { val, .. } => *val == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Fp { p, val: a }, Scalar::Fp { p: q, val: b }) => {
                assert_eq!(p, q, "field mismatch");
                Scalar::Fp {
                    p: *p,
                    val: fp_add(*a, *b, *p),
                }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(Box::new(&**a + &**b)),
            _ => panic!("field mismatch"),
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Fp { p, val: a }, Scalar::Fp { p: q, val: b }) => {
                assert_eq!(p, q, "field mismatch");
                Scalar::Fp {
                    p: *p,
                    val: fp_sub(*a, *b, *p),
                }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(Box::new(&**a - &**b)),
            _ => panic!("field mismatch"),
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Fp { p, val: a }, Scalar::Fp { p: q, val: b }) => {
                assert_eq!(p, q, "field mismatch");
                Scalar::Fp {
                    p: *p,
                    val: fp_mul(*a, *b, *p),
                }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(Box::new(&**a * &**b)),
            _ => panic!("field mismatch"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Fp { p, val } => Scalar::Fp {
                p: *p,
                val: fp_sub(0, *val, *p),
            },
            Scalar::Rat(r) => Scalar::Rat(Box::new(-&**r)),
        }
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(match self {
            Scalar::Fp { p, val } => Scalar::Fp {
                p: *p,
                val: fp_inv(*val, *p),
            },
            Scalar::Rat(r) => Scalar::Rat(Box::new(r.recip())),
        })
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// `self + c · other`, the kernel of all row operations.
    pub fn add_mul(&self, c: &Scalar, other: &Scalar) -> Scalar {
        self.add(&c.mul(other))
    }

    /// A canonical string form: the least nonnegative residue over `F_p`, a
    /// reduced fraction (or plain integer) over the rationals. [`Field::parse`]
    /// inverts it.
    pub fn to_canonical_string(&self) -> String {
        match self {
            Scalar::Fp { val, .. } => val.to_string(),
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
        }
    }

    /// The sign `(-1)^k` as a scalar in the same field.
    pub fn sign_pow(field: &Field, k: usize) -> Scalar {
        if k % 2 == 0 {
            field.one()
        } else {
            field.from_i64(-1)
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_canonical_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characteristic_validation() {
        assert!(Field::new(0).is_ok());
        assert!(Field::new(2).is_ok());
        assert!(Field::new(5).is_ok());
        assert!(Field::new(2147483647).is_ok()); // 2^31 - 1 is prime
        assert!(Field::new(1).is_err());
        assert!(Field::new(4).is_err());
        assert!(Field::new(91).is_err()); // 7 * 13
        assert!(Field::prime(0).is_err());
    }

    #[test]
    fn fp_arithmetic() {
        let f5 = Field::prime(5).unwrap();
        let a = f5.from_i64(3);
        let b = f5.from_i64(4);
        assert_eq!(a.add(&b), f5.from_i64(2)); // 7 = 2 mod 5
        assert_eq!(a.mul(&b), f5.from_i64(2)); // 12 = 2 mod 5
        assert_eq!(a.sub(&b), f5.from_i64(4)); // -1 = 4 mod 5
        assert_eq!(a.neg(), f5.from_i64(2));
        assert_eq!(a.inv().unwrap(), f5.from_i64(2)); // 3 * 2 = 6 = 1 mod 5
        assert_eq!(b.div(&a).unwrap(), f5.from_i64(3)); // 4 * 2 = 8 = 3 mod 5
        assert!(f5.zero().inv().is_err());
        assert_eq!(f5.from_i64(-7), f5.from_i64(3));
    }

    #[test]
    fn rational_arithmetic() {
        let q = Field::rationals();
        let half = q.parse("1/2").unwrap();
        let third = q.parse("1/3").unwrap();
        let sum = half.add(&third);
        assert_eq!(sum, q.parse("5/6").unwrap());
        assert_eq!(half.mul(&third), q.parse("1/6").unwrap());
        assert_eq!(half.sub(&third), q.parse("1/6").unwrap());
        assert_eq!(half.inv().unwrap(), q.from_i64(2));
        assert_eq!(q.parse("-4/6").unwrap().to_canonical_string(), "-2/3");
        assert_eq!(q.from_i64(7).to_canonical_string(), "7");
    }

    #[test]
    fn parse_round_trip() {
        let f7 = Field::prime(7).unwrap();
        // 3/4 over F7: 4^{-1} = 2, so 3 * 2 = 6.
        assert_eq!(f7.parse("3/4").unwrap(), f7.from_i64(6));
        assert_eq!(f7.parse("-1").unwrap(), f7.from_i64(6));
        assert!(f7.parse("1/7").is_err()); // denominator vanishes mod 7
        assert!(f7.parse("x").is_err());
        assert!(Field::rationals().parse("1/0").is_err());
        for s in ["0", "6", "3"] {
            let v = f7.parse(s).unwrap();
            assert_eq!(f7.parse(&v.to_canonical_string()).unwrap(), v);
        }
    }

    #[test]
    fn element_enumeration() {
        let f3 = Field::prime(3).unwrap();
        let els = f3.elements().unwrap();
        assert_eq!(els.len(), 3);
        assert_eq!(els[0], f3.zero());
        assert_eq!(els[1], f3.one());
        assert!(Field::rationals().elements().is_err());
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mismatch_panics() {
        let a = Field::prime(3).unwrap().one();
        let b = Field::prime(5).unwrap().one();
        let _ = a.add(&b);
    }

    #[test]
    fn signs() {
        let q = Field::rationals();
        assert_eq!(Scalar::sign_pow(&q, 0), q.one());
        assert_eq!(Scalar::sign_pow(&q, 3), q.from_i64(-1));
        let f2 = Field::prime(2).unwrap();
        assert_eq!(Scalar::sign_pow(&f2, 1), f2.one());
    }
}
