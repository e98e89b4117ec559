//! Exact arithmetic in the ground ring `Λ = Z[X,Y,Z^{±1}] / (X² = Y² = 1)`.
//!
//! Elements are stored as maps from `(εx, εy, k)` to nonzero integer
//! coefficients, where `εx, εy ∈ {0,1}` are the exponents of `X` and `Y`
//! and `k ∈ Z` is the exponent of `Z`. The unit group of Λ consists of
//! signed monomials `±X^a Y^b Z^k`, which get a compact representation of
//! their own ([`UnitMonomial`]) since all cube bookkeeping stays inside it.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Bidegree of a chronological cobordism: `(#births − #merges, #deaths − #splits)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct Bidegree {
    pub a: i64,
    pub b: i64,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree { a: 0, b: 0 };
    pub const MERGE: Bidegree = Bidegree { a: -1, b: 0 };
    pub const SPLIT: Bidegree = Bidegree { a: 0, b: -1 };
    pub const BIRTH: Bidegree = Bidegree { a: 1, b: 0 };
    pub const DEATH: Bidegree = Bidegree { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        Bidegree { a, b }
    }

    /// Collapsed integral degree `a + b` (the Euler characteristic).
    pub fn total(self) -> i64 {
        self.a + self.b
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, rhs: Bidegree) -> Bidegree {
        Bidegree::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl AddAssign for Bidegree {
    fn add_assign(&mut self, rhs: Bidegree) {
        self.a += rhs.a;
        self.b += rhs.b;
    }
}

impl Neg for Bidegree {
    type Output = Bidegree;
    fn neg(self) -> Bidegree {
        Bidegree::new(-self.a, -self.b)
    }
}

/// A signed monomial `±X^εx Y^εy Z^k`, i.e. a unit of Λ.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct UnitMonomial {
    pub sign: i8,
    pub ex: u8,
    pub ey: u8,
    pub k: i64,
}

#[allow(clippy::should_implement_trait)]
impl UnitMonomial {
    pub const ONE: UnitMonomial = UnitMonomial { sign: 1, ex: 0, ey: 0, k: 0 };
    pub const X: UnitMonomial = UnitMonomial { sign: 1, ex: 1, ey: 0, k: 0 };
    pub const Y: UnitMonomial = UnitMonomial { sign: 1, ex: 0, ey: 1, k: 0 };
    pub const XY: UnitMonomial = UnitMonomial { sign: 1, ex: 1, ey: 1, k: 0 };
    pub const Z: UnitMonomial = UnitMonomial { sign: 1, ex: 0, ey: 0, k: 1 };
    pub const Z_INV: UnitMonomial = UnitMonomial { sign: 1, ex: 0, ey: 0, k: -1 };

    pub fn new(sign: i8, ex: i64, ey: i64, k: i64) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        UnitMonomial { sign, ex: (ex.rem_euclid(2)) as u8, ey: (ey.rem_euclid(2)) as u8, k }
    }

    pub fn mul(self, rhs: UnitMonomial) -> UnitMonomial {
        UnitMonomial {
            sign: self.sign * rhs.sign,
            ex: (self.ex + rhs.ex) % 2,
            ey: (self.ey + rhs.ey) % 2,
            k: self.k + rhs.k,
        }
    }

    /// Multiplicative inverse; exists for every unit.
    pub fn inverse(self) -> UnitMonomial {
        UnitMonomial { sign: self.sign, ex: self.ex, ey: self.ey, k: -self.k }
    }

    pub fn neg(self) -> UnitMonomial {
        UnitMonomial { sign: -self.sign, ..self }
    }

    pub fn pow(self, n: i64) -> UnitMonomial {
        let m = if n >= 0 { self } else { self.inverse() };
        let mut acc = UnitMonomial::ONE;
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(m);
        }
        acc
    }
}

impl fmt::Display for UnitMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        if self.sign < 0 {
            s.push('-');
        }
        if self.ex == 1 {
            s.push('X');
        }
        if self.ey == 1 {
            s.push('Y');
        }
        if self.k != 0 {
            s.push('Z');
            if self.k != 1 {
                s.push_str(&format!("^{}", self.k));
            }
        }
        if self.ex == 0 && self.ey == 0 && self.k == 0 {
            s.push('1');
        }
        write!(f, "{s}")
    }
}

/// Least non-negative residue mod 2.
pub fn mod2(x: &BigInt) -> BigInt {
    let r = x % 2;
    if r < BigInt::zero() {
        r + 2
    } else {
        r
    }
}

/// The coefficient `λ(deg W, deg W')` of the chronology change that permutes
/// two disjoint cobordisms, from `W` below `W'` to `W'` below `W`:
/// `λ((a,b),(c,d)) = X^{ac} Y^{bd} Z^{ad−bc}`.
pub fn lambda(d1: Bidegree, d2: Bidegree) -> UnitMonomial {
    UnitMonomial::new(1, d1.a * d2.a, d1.b * d2.b, d1.a * d2.b - d1.b * d2.a)
}

/// An element of Λ in canonical form: no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CoeffElement {
    terms: BTreeMap<(u8, u8, i64), BigInt>,
}

impl CoeffElement {
    pub fn zero() -> Self {
        CoeffElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        CoeffElement::from_unit(UnitMonomial::ONE)
    }

    pub fn from_unit(u: UnitMonomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((u.ex, u.ey, u.k), BigInt::from(u.sign));
        CoeffElement { terms }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        let n: BigInt = n.into();
        let mut terms = BTreeMap::new();
        if !n.is_zero() {
            terms.insert((0, 0, 0), n);
        }
        CoeffElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u8, u8, i64), &BigInt)> {
        self.terms.iter()
    }

    fn insert_term(&mut self, key: (u8, u8, i64), c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale_unit(&self, u: UnitMonomial) -> CoeffElement {
        let mut out = CoeffElement::zero();
        for (&(x, y, k), c) in &self.terms {
            let key = ((x + u.ex) % 2, (y + u.ey) % 2, k + u.k);
            out.insert_term(key, if u.sign < 0 { -c } else { c.clone() });
        }
        out
    }

    /// If the element is a single signed monomial, return it as a unit.
    pub fn as_unit(&self) -> Option<UnitMonomial> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&(x, y, k), c) = self.terms.iter().next().unwrap();
        if c.magnitude().is_one() {
            Some(UnitMonomial { sign: if c.is_negative() { -1 } else { 1 }, ex: x, ey: y, k })
        } else {
            None
        }
    }

    /// Push the element through a specialization; a ring homomorphism into Z
    /// (reduced mod 2 for the mod-2 target).
    pub fn specialize(&self, s: &Specialization) -> BigInt {
        let mut acc = BigInt::zero();
        for (&(x, y, k), c) in &self.terms {
            let mut u = 1i64;
            if x == 1 {
                u *= s.image_x;
            }
            if y == 1 {
                u *= s.image_y;
            }
            // imageZ is ±1, so Z^k contributes image_z^(k mod 2).
            if k.rem_euclid(2) == 1 {
                u *= s.image_z;
            }
            acc += c * BigInt::from(u);
        }
        if matches!(s.target, SpecTarget::IntMod2) {
            acc = mod2(&acc);
        }
        acc
    }
}

impl From<UnitMonomial> for CoeffElement {
    fn from(u: UnitMonomial) -> Self {
        CoeffElement::from_unit(u)
    }
}

impl Add for &CoeffElement {
    type Output = CoeffElement;
    fn add(self, rhs: &CoeffElement) -> CoeffElement {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.insert_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &CoeffElement {
    type Output = CoeffElement;
    fn sub(self, rhs: &CoeffElement) -> CoeffElement {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.insert_term(*k, -c);
        }
        out
    }
}

impl Neg for &CoeffElement {
    type Output = CoeffElement;
    fn neg(self) -> CoeffElement {
        let mut out = CoeffElement::zero();
        for (k, c) in &self.terms {
            out.terms.insert(*k, -c);
        }
        out
    }
}

impl Mul for &CoeffElement {
    type Output = CoeffElement;
    fn mul(self, rhs: &CoeffElement) -> CoeffElement {
        let mut out = CoeffElement::zero();
        for (&(x1, y1, k1), c1) in &self.terms {
            for (&(x2, y2, k2), c2) in &rhs.terms {
                out.insert_term(((x1 + x2) % 2, (y1 + y2) % 2, k1 + k2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for CoeffElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(x, y, k), c) in &self.terms {
            let mono = UnitMonomial { sign: 1, ex: x, ey: y, k };
            let mag = c.magnitude();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if !mag.is_one() || mono == UnitMonomial::ONE {
                write!(f, "{mag}")?;
            }
            if mono != UnitMonomial::ONE {
                write!(f, "{mono}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// JSON form of a Λ element: `{"terms":[{"x":0,"y":1,"k":-2,"c":"3"},...]}`.
#[derive(Serialize, Deserialize)]
pub struct CoeffJson {
    pub terms: Vec<CoeffTermJson>,
}

#[derive(Serialize, Deserialize)]
pub struct CoeffTermJson {
    pub x: u8,
    pub y: u8,
    pub k: i64,
    pub c: String,
}

impl CoeffElement {
    pub fn to_json(&self) -> CoeffJson {
        CoeffJson {
            terms: self
                .terms
                .iter()
                .map(|(&(x, y, k), c)| CoeffTermJson { x, y, k, c: c.to_string() })
                .collect(),
        }
    }
}

/// Target ring of a specialization.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpecTarget {
    Int,
    IntMod2,
    /// Integers with the dotted parameters substituted by the given values.
    IntHt { h: i64, t: i64 },
}

/// A ring homomorphism Λ → target, determined by the images of X, Y, Z.
#[derive(Clone, Debug)]
pub struct Specialization {
    pub name: &'static str,
    pub image_x: i64,
    pub image_y: i64,
    pub image_z: i64,
    pub target: SpecTarget,
}

impl Specialization {
    /// `Z_ev`: X = Y = Z = 1.
    pub fn even() -> Self {
        Specialization { name: "even", image_x: 1, image_y: 1, image_z: 1, target: SpecTarget::Int }
    }

    /// `Z_odd`: X = Z = 1, Y = −1.
    pub fn odd() -> Self {
        Specialization { name: "odd", image_x: 1, image_y: -1, image_z: 1, target: SpecTarget::Int }
    }

    /// Both theories collapsed mod 2.
    pub fn mod2() -> Self {
        Specialization { name: "mod2", image_x: 1, image_y: 1, image_z: 1, target: SpecTarget::IntMod2 }
    }

    /// Even-type specialization of the dotted theory with integral h, t.
    pub fn dotted_even(h: i64, t: i64) -> Self {
        Specialization {
            name: "dotted-even",
            image_x: 1,
            image_y: 1,
            image_z: 1,
            target: SpecTarget::IntHt { h, t },
        }
    }

    /// `imageX² = imageY² = 1` and `imageZ` invertible in the target.
    pub fn is_well_formed(&self) -> bool {
        self.image_x * self.image_x == 1
            && self.image_y * self.image_y == 1
            && (self.image_z == 1 || self.image_z == -1)
    }

    pub fn unit(&self, u: UnitMonomial) -> BigInt {
        CoeffElement::from_unit(u).specialize(self)
    }
}
