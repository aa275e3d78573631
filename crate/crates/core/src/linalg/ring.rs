//! The three coefficient rings: `Z`, `Z/N` and `Z[1/c]`.
//!
//! All three are elementary divisor rings, so every matrix over them has a
//! Smith normal form. Elements are stored uniformly as a numerator together
//! with an exponent of the localizing constant; for `Z` and `Z/N` the
//! exponent is always zero.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// A coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseRing {
    Integers,
    /// `Z/N` with `N >= 2`.
    IntegersMod(BigInt),
    /// `Z[1/c]` with `|c| >= 2`; stored with `c > 0`.
    IntegersLoc(BigInt),
}

/// An element of some [`BaseRing`], always in canonical form for that ring.
///
/// For `Z[1/c]` the value is `num / c^exp` with `c` not dividing `num`
/// (the exponent may be negative). For `Z/N` the numerator lies in `[0, N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    num: BigInt,
    exp: i64,
}

impl Elem {
    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The value as an integer when the denominator is trivial.
    pub fn to_integer(&self, base: &BaseRing) -> Option<BigInt> {
        match base {
            BaseRing::IntegersLoc(_) if self.exp > 0 => None,
            BaseRing::IntegersLoc(c) => Some(&self.num * c.pow((-self.exp) as u32)),
            _ => Some(self.num.clone()),
        }
    }

    fn raw(num: BigInt) -> Self {
        Elem { num, exp: 0 }
    }
}

/// Display helper that renders an element with its denominator expanded.
pub struct ElemDisplay<'a> {
    elem: &'a Elem,
    base: &'a BaseRing,
}

impl fmt::Display for ElemDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base {
            BaseRing::IntegersLoc(c) if self.elem.exp > 0 => {
                write!(f, "{}/{}", self.elem.num, c.pow(self.elem.exp as u32))
            }
            _ => write!(f, "{}", self.elem.to_integer(self.base).expect("integral value")),
        }
    }
}

impl Serialize for BaseRing {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Integers => write!(f, "Z"),
            BaseRing::IntegersMod(n) => write!(f, "Z/{n}"),
            BaseRing::IntegersLoc(c) => write!(f, "Z[1/{c}]"),
        }
    }
}

/// Extended gcd over the integers: `(g, s, t)` with `s*a + t*b = g >= 0`.
pub(crate) fn int_xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

fn mod_inverse(a: &BigInt, n: &BigInt) -> Option<BigInt> {
    let (g, s, _) = int_xgcd(&a.mod_floor(n), n);
    if g.is_one() {
        Some(s.mod_floor(n))
    } else {
        None
    }
}

/// Removes from `n` every prime factor it shares with `c`.
fn strip(n: &BigInt, c: &BigInt) -> BigInt {
    let mut n = n.abs();
    if n.is_zero() {
        return n;
    }
    loop {
        let g = n.gcd(c);
        if g.is_one() {
            return n;
        }
        n /= g;
    }
}

impl BaseRing {
    pub fn integers_mod(n: impl Into<BigInt>) -> Result<Self> {
        let n = n.into();
        if n < BigInt::from(2) {
            return Err(Error::InvalidModulus(n.to_string()));
        }
        Ok(BaseRing::IntegersMod(n))
    }

    pub fn integers_loc(c: impl Into<BigInt>) -> Result<Self> {
        let c = c.into().abs();
        if c < BigInt::from(2) {
            return Err(Error::InvalidModulus(c.to_string()));
        }
        Ok(BaseRing::IntegersLoc(c))
    }

    pub fn display<'a>(&'a self, e: &'a Elem) -> ElemDisplay<'a> {
        ElemDisplay { elem: e, base: self }
    }

    fn normalize(&self, num: BigInt, exp: i64) -> Elem {
        match self {
            BaseRing::Integers => Elem::raw(num),
            BaseRing::IntegersMod(n) => Elem::raw(num.mod_floor(n)),
            BaseRing::IntegersLoc(c) => {
                if num.is_zero() {
                    return Elem::raw(num);
                }
                let (mut num, mut exp) = (num, exp);
                loop {
                    let (q, r) = num.div_rem(c);
                    if !r.is_zero() {
                        break;
                    }
                    num = q;
                    exp -= 1;
                }
                Elem { num, exp }
            }
        }
    }

    pub fn zero(&self) -> Elem {
        Elem::raw(BigInt::zero())
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    pub fn from_int(&self, v: impl Into<BigInt>) -> Elem {
        self.normalize(v.into(), 0)
    }

    /// `num / den` where `den` must be invertible (only meaningful in `Z[1/c]`,
    /// or `Z/N` with `den` coprime to `N`).
    pub fn from_fraction(&self, num: impl Into<BigInt>, den: impl Into<BigInt>) -> Option<Elem> {
        let d = self.from_int(den);
        let inv = self.inv(&d)?;
        Some(self.mul(&self.from_int(num), &inv))
    }

    /// Maps an integer-valued element of `Z` into this ring.
    pub fn from_integer_elem(&self, e: &Elem) -> Elem {
        self.normalize(e.num.clone(), 0)
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match self {
            BaseRing::IntegersLoc(c) => {
                if a.is_zero() {
                    return b.clone();
                }
                if b.is_zero() {
                    return a.clone();
                }
                let e = a.exp.max(b.exp);
                let na = &a.num * c.pow((e - a.exp) as u32);
                let nb = &b.num * c.pow((e - b.exp) as u32);
                self.normalize(na + nb, e)
            }
            _ => self.normalize(&a.num + &b.num, 0),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        self.normalize(-&a.num, a.exp)
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        self.normalize(&a.num * &b.num, a.exp + b.exp)
    }

    pub fn is_unit(&self, a: &Elem) -> bool {
        match self {
            BaseRing::Integers => a.num.abs().is_one(),
            BaseRing::IntegersMod(n) => a.num.gcd(n).is_one(),
            BaseRing::IntegersLoc(c) => strip(&a.num, c).is_one(),
        }
    }

    pub fn inv(&self, a: &Elem) -> Option<Elem> {
        if !self.is_unit(a) {
            return None;
        }
        match self {
            BaseRing::Integers => Some(a.clone()),
            BaseRing::IntegersMod(n) => mod_inverse(&a.num, n).map(Elem::raw),
            BaseRing::IntegersLoc(_) => self.div(&self.one(), a),
        }
    }

    /// Whether `a` divides `b`.
    pub fn divides(&self, a: &Elem, b: &Elem) -> bool {
        if a.is_zero() {
            return b.is_zero();
        }
        match self {
            BaseRing::Integers => b.num.is_multiple_of(&a.num),
            BaseRing::IntegersMod(n) => b.num.is_multiple_of(&a.num.gcd(n)),
            BaseRing::IntegersLoc(c) => b.num.is_multiple_of(&strip(&a.num, c)),
        }
    }

    /// Some `q` with `a * q = b`, if one exists.
    pub fn div(&self, b: &Elem, a: &Elem) -> Option<Elem> {
        if a.is_zero() {
            return if b.is_zero() { Some(self.zero()) } else { None };
        }
        match self {
            BaseRing::Integers => {
                let (q, r) = b.num.div_rem(&a.num);
                r.is_zero().then(|| Elem::raw(q))
            }
            BaseRing::IntegersMod(n) => {
                let g = a.num.gcd(n);
                if !b.num.is_multiple_of(&g) {
                    return None;
                }
                let n1 = n / &g;
                if n1.is_one() {
                    return Some(self.zero());
                }
                let inv = mod_inverse(&(&a.num / &g), &n1)?;
                Some(self.normalize((&b.num / &g) * inv, 0))
            }
            BaseRing::IntegersLoc(c) => {
                let s = strip(&a.num, c);
                if !b.num.is_multiple_of(&s) {
                    return None;
                }
                let w = &b.num / &s;
                // a.num = s * u with u a signed product of primes dividing c
                let u = &a.num / &s;
                let mut k = 0u32;
                let mut ck = BigInt::one();
                while !ck.is_multiple_of(&u) {
                    ck *= c;
                    k += 1;
                }
                let num = w * (&ck / &u);
                Some(self.normalize(num, k as i64 + b.exp - a.exp))
            }
        }
    }

    /// A unimodular 2x2 transform `[[s, t], [u, v]]` (determinant one) with
    /// `s*a + t*b = g` and `u*a + v*b = 0`, where `g` divides `a` and `b`.
    ///
    /// Returns `(g, [s, t, u, v])`.
    pub fn bezout(&self, a: &Elem, b: &Elem) -> (Elem, [Elem; 4]) {
        let (g0, s, t) = int_xgcd(&a.num, &b.num);
        debug_assert!(!g0.is_zero());
        let qa = &a.num / &g0;
        let qb = &b.num / &g0;
        match self {
            BaseRing::IntegersLoc(_) => {
                let g = self.normalize(g0, 0);
                let s = self.normalize(s, -a.exp);
                let t = self.normalize(t, -b.exp);
                let u = self.normalize(-qb, b.exp);
                let v = self.normalize(qa, a.exp);
                (g, [s, t, u, v])
            }
            _ => (
                self.normalize(g0, 0),
                [
                    self.normalize(s, 0),
                    self.normalize(t, 0),
                    self.normalize(-qb, 0),
                    self.normalize(qa, 0),
                ],
            ),
        }
    }

    /// Euclidean size used for pivot selection; strictly decreases along
    /// `bezout` whenever `a` does not divide `b`.
    pub fn size(&self, a: &Elem) -> BigInt {
        match self {
            BaseRing::Integers => a.num.abs(),
            BaseRing::IntegersMod(n) => a.num.gcd(n),
            BaseRing::IntegersLoc(c) => strip(&a.num, c),
        }
    }

    /// Canonical associate of `a` together with a unit `w` such that `w*a` is it.
    pub fn associate(&self, a: &Elem) -> (Elem, Elem) {
        if a.is_zero() {
            return (self.zero(), self.one());
        }
        match self {
            BaseRing::Integers => {
                if a.num.is_negative() {
                    (self.neg(a), self.from_int(-1))
                } else {
                    (a.clone(), self.one())
                }
            }
            BaseRing::IntegersMod(n) => {
                let g = a.num.gcd(n);
                let n1 = n / &g;
                let u0 = mod_inverse(&(&a.num / &g), &n1).unwrap_or_else(BigInt::zero);
                let mut u = u0;
                while !u.gcd(n).is_one() {
                    u += &n1;
                }
                (Elem::raw(g), self.normalize(u, 0))
            }
            BaseRing::IntegersLoc(c) => {
                let s = self.from_int(strip(&a.num, c));
                let w = self.div(&s, a).expect("associate divides");
                (s, w)
            }
        }
    }

    pub fn canonical(&self, a: &Elem) -> Elem {
        self.associate(a).0
    }

    /// A generator of the annihilator ideal of `a`.
    pub fn annihilator(&self, a: &Elem) -> Elem {
        match self {
            BaseRing::IntegersMod(n) => self.normalize(n / a.num.gcd(n), 0),
            _ => {
                if a.is_zero() {
                    self.one()
                } else {
                    self.zero()
                }
            }
        }
    }

    /// Canonical residue of `a` modulo the ideal generated by the canonical
    /// associate `d`; `d = 0` leaves `a` unchanged.
    pub fn reduce_mod(&self, a: &Elem, d: &Elem) -> Elem {
        if d.is_zero() {
            return a.clone();
        }
        if self.is_unit(d) {
            return self.zero();
        }
        match self {
            BaseRing::Integers => Elem::raw(a.num.mod_floor(&d.num)),
            BaseRing::IntegersMod(_) => Elem::raw(a.num.mod_floor(&d.num)),
            BaseRing::IntegersLoc(c) => {
                let m = &d.num;
                let r = if a.exp >= 0 {
                    let cinv = mod_inverse(&c.mod_floor(m), m).expect("d coprime to c");
                    (&a.num * cinv.modpow(&BigInt::from(a.exp), m)).mod_floor(m)
                } else {
                    (&a.num * c.modpow(&BigInt::from(-a.exp), m)).mod_floor(m)
                };
                self.normalize(r, 0)
            }
        }
    }

    /// Parses `"Z"`, `"Z/N"` or `"Z[1/c]"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Z" {
            return Ok(BaseRing::Integers);
        }
        if let Some(rest) = s.strip_prefix("Z/") {
            let n: BigInt = rest.trim().parse().map_err(|_| Error::Parse(format!("bad modulus `{rest}`")))?;
            return BaseRing::integers_mod(n);
        }
        if let Some(rest) = s.strip_prefix("Z[1/").and_then(|r| r.strip_suffix(']')) {
            let c: BigInt = rest.trim().parse().map_err(|_| Error::Parse(format!("bad localizing constant `{rest}`")))?;
            return BaseRing::integers_loc(c);
        }
        Err(Error::Parse(format!("unknown base ring `{s}`")))
    }

    /// Parses an integer or, over `Z[1/c]`, a fraction `a/b` with `b` a unit.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let bad = || Error::Parse(format!("bad ring element `{s}`"));
        if let Some((a, b)) = s.split_once('/') {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            self.from_fraction(a, b).ok_or_else(bad)
        } else {
            let a: BigInt = s.trim().parse().map_err(|_| bad())?;
            Ok(self.from_int(a))
        }
    }
}
