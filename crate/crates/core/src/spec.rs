//! Seaweed specifications `TYPE:n:top|bottom` and the Ξ predicate.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::composition::Composition;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgebraType {
    /// gl(n)
    A,
    /// so(2n+1)
    B,
    /// sp(2n)
    C,
    /// so(2n)
    D,
}

impl AlgebraType {
    pub fn letter(self) -> char {
        match self {
            AlgebraType::A => 'A',
            AlgebraType::B => 'B',
            AlgebraType::C => 'C',
            AlgebraType::D => 'D',
        }
    }

    pub const ALL: [AlgebraType; 4] = [
        AlgebraType::A,
        AlgebraType::B,
        AlgebraType::C,
        AlgebraType::D,
    ];
}

impl fmt::Display for AlgebraType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for AlgebraType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(AlgebraType::A),
            "B" | "b" => Ok(AlgebraType::B),
            "C" | "c" => Ok(AlgebraType::C),
            "D" | "d" => Ok(AlgebraType::D),
            other => Err(Error::Parse {
                input: other.to_string(),
                reason: "algebra type must be one of A, B, C, D".into(),
            }),
        }
    }
}

/// One of the two compositions of a spec.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Top,
    Bottom,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Top => Side::Bottom,
            Side::Bottom => Side::Top,
        }
    }
}

/// The canonical name of a seaweed: algebra type, rank parameter and the
/// pair of compositions.
///
/// `top` is the first composition of the pair; in a meander its arcs are
/// drawn below the vertex line, while `bottom` is drawn above.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SeaweedSpec {
    algebra: AlgebraType,
    n: BigUint,
    top: Composition,
    bottom: Composition,
}

/// Result of testing a type-D pair for membership in Ξ_n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct XiMembership {
    pub in_xi: bool,
    /// The side whose total is `n`, when `in_xi` holds.
    pub full_side: Option<Side>,
}

impl XiMembership {
    pub const NO: XiMembership = XiMembership {
        in_xi: false,
        full_side: None,
    };
}

/// Validates and canonicalizes a spec.
///
/// For type D a composition with total `n` whose last block is 1 loses that
/// block: the stabilizer of the `(n-1)`-dimensional isotropic subspace already
/// fixes both maximal isotropic subspaces containing it.
pub fn make_spec(
    algebra: AlgebraType,
    n: impl Into<BigUint>,
    top: Composition,
    bottom: Composition,
) -> Result<SeaweedSpec> {
    let n = n.into();
    if n < BigUint::one() {
        return Err(Error::Domain("rank parameter n must be positive".into()));
    }
    match algebra {
        AlgebraType::A => {
            if top.total() != &n || bottom.total() != &n {
                return Err(Error::UnequalTotals {
                    n: n.to_string(),
                    top: top.total().to_string(),
                    bottom: bottom.total().to_string(),
                });
            }
            Ok(SeaweedSpec {
                algebra,
                n,
                top,
                bottom,
            })
        }
        AlgebraType::B | AlgebraType::C | AlgebraType::D => {
            for (side, c) in [("top", &top), ("bottom", &bottom)] {
                if c.total() > &n {
                    return Err(Error::TotalOutOfBounds {
                        side,
                        total: c.total().to_string(),
                        bound: n.to_string(),
                    });
                }
            }
            let (top, bottom) = if algebra == AlgebraType::D {
                (drop_trailing_one(top, &n), drop_trailing_one(bottom, &n))
            } else {
                (top, bottom)
            };
            Ok(SeaweedSpec {
                algebra,
                n,
                top,
                bottom,
            })
        }
    }
}

fn drop_trailing_one(c: Composition, n: &BigUint) -> Composition {
    if c.total() == n && c.last().is_some_and(|b| b.is_one()) {
        c.without_last()
    } else {
        c
    }
}

impl SeaweedSpec {
    pub fn new(
        algebra: AlgebraType,
        n: impl Into<BigUint>,
        top: impl Into<Composition>,
        bottom: impl Into<Composition>,
    ) -> Result<Self> {
        make_spec(algebra, n, top.into(), bottom.into())
    }

    pub fn algebra(&self) -> AlgebraType {
        self.algebra
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn top(&self) -> &Composition {
        &self.top
    }

    pub fn bottom(&self) -> &Composition {
        &self.bottom
    }

    pub fn side(&self, side: Side) -> &Composition {
        match side {
            Side::Top => &self.top,
            Side::Bottom => &self.bottom,
        }
    }

    /// The same seaweed with the two compositions exchanged.
    pub fn swapped(&self) -> SeaweedSpec {
        SeaweedSpec {
            algebra: self.algebra,
            n: self.n.clone(),
            top: self.bottom.clone(),
            bottom: self.top.clone(),
        }
    }

    /// Same compositions, another algebra type (re-validated).
    pub fn with_type(&self, algebra: AlgebraType) -> Result<SeaweedSpec> {
        make_spec(
            algebra,
            self.n.clone(),
            self.top.clone(),
            self.bottom.clone(),
        )
    }

    pub fn n_usize(&self) -> Option<usize> {
        self.n.to_usize()
    }

    /// Size of the matrices realizing the ambient algebra.
    pub fn ambient_size(&self) -> BigUint {
        match self.algebra {
            AlgebraType::A => self.n.clone(),
            AlgebraType::C | AlgebraType::D => &self.n * 2u32,
            AlgebraType::B => &self.n * 2u32 + 1u32,
        }
    }

    pub fn xi_membership(&self) -> XiMembership {
        xi_membership(self)
    }
}

/// Tests whether a type-D pair lies in Ξ_n: one total equals `n` with last
/// block greater than 1 while the other total equals `n - 1`.
pub fn xi_membership(spec: &SeaweedSpec) -> XiMembership {
    if spec.algebra != AlgebraType::D || spec.n <= BigUint::one() {
        return XiMembership::NO;
    }
    let n = &spec.n;
    let n_minus_1 = n - 1u32;
    let full = |c: &Composition| c.total() == n && c.last().is_some_and(|b| !b.is_one());
    if full(&spec.top) && spec.bottom.total() == &n_minus_1 {
        XiMembership {
            in_xi: true,
            full_side: Some(Side::Top),
        }
    } else if full(&spec.bottom) && spec.top.total() == &n_minus_1 {
        XiMembership {
            in_xi: true,
            full_side: Some(Side::Bottom),
        }
    } else {
        XiMembership::NO
    }
}

impl fmt::Display for SeaweedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}|{}",
            self.algebra, self.n, self.top, self.bottom
        )
    }
}

impl fmt::Debug for SeaweedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for SeaweedSpec {
    type Err = Error;

    /// Parses the canonical syntax `TYPE:n:top|bottom`, e.g.
    /// `C:200:15,185|17,61,117`; `-` stands for the empty composition.
    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let mut parts = s.trim().splitn(3, ':');
        let (Some(ty), Some(n), Some(pair)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(parse_err("expected TYPE:n:top|bottom"));
        };
        let algebra: AlgebraType = ty.parse().map_err(|_| parse_err("unknown algebra type"))?;
        let n: BigUint = n
            .trim()
            .parse()
            .map_err(|_| parse_err("n must be a non-negative integer"))?;
        let (top, bottom) = pair
            .split_once('|')
            .ok_or_else(|| parse_err("missing '|' between the compositions"))?;
        if bottom.contains('|') {
            return Err(parse_err("more than one '|'"));
        }
        let top: Composition = top.parse().map_err(|e: Error| parse_err(&e.to_string()))?;
        let bottom: Composition = bottom
            .parse()
            .map_err(|e: Error| parse_err(&e.to_string()))?;
        make_spec(algebra, n, top, bottom)
    }
}

impl Serialize for SeaweedSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SeaweedSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
