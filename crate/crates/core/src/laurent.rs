//! Laurent polynomials over an ordered field and the positive-cone
//! isomorphism of their additive group.
//!
//! `K[t^{+-1}]` carries the ring order induced by `t > K`: a polynomial is
//! positive when its highest-degree nonzero coefficient is. The group is
//! order isomorphic to its own positive cone. The isomorphism factors
//! through lexicographic pairs `(n, q)` with `q` supported in degrees <= 0:
//!
//! * [`encode_lex`] sends a polynomial of positive leading degree `n` and
//!   leading coefficient `c` to `(sign(c) * n, t^{-n} * rest +-
//!   from_positive(|c|))`, and a polynomial of degree <= 0 to `(0, itself)`;
//! * [`encode_lex_positive`] does the same for strictly positive
//!   polynomials of arbitrary leading degree.
//!
//! Both are order isomorphisms onto the lexicographic product, so composing
//! one with the inverse of the other yields order isomorphisms between the
//! group and its positive cone in both directions. Degrees at most double
//! along the way: a degree window `[-n, n]` lands inside `[-2n, 2n]`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ordered_field::{from_positive, to_positive, OrderedFieldValue};

/// Finitely supported map from integer degrees to nonzero field values.
///
/// Exact carriers never store zeros. Lazy carriers may hold values whose
/// vanishing is undecided; degree lookups skip entries that prove zero.
#[derive(Clone)]
pub struct LaurentPoly<K> {
    coeffs: BTreeMap<i64, K>,
}

impl<K: OrderedFieldValue> LaurentPoly<K> {
    pub fn zero() -> Self {
        LaurentPoly {
            coeffs: BTreeMap::new(),
        }
    }

    /// Single term `c * t^deg`; ignored if `c` proves zero.
    pub fn term(deg: i64, c: K) -> Self {
        let mut p = LaurentPoly::zero();
        p.insert(deg, c);
        p
    }

    pub fn constant(c: K) -> Self {
        LaurentPoly::term(0, c)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, K)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (d, c) in pairs {
            p.insert(d, c);
        }
        p
    }

    /// Adds `c` into the coefficient at `deg`, dropping it if the sum
    /// proves zero.
    pub fn insert(&mut self, deg: i64, c: K) {
        let merged = match self.coeffs.remove(&deg) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !matches!(merged.is_zero(), Ok(true)) {
            self.coeffs.insert(deg, merged);
        }
    }

    pub fn coeff(&self, deg: i64) -> Option<&K> {
        self.coeffs.get(&deg)
    }

    /// Entries in descending degree order.
    pub fn iter_desc(&self) -> impl Iterator<Item = (i64, &K)> {
        self.coeffs.iter().rev().map(|(d, c)| (*d, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, c) in &other.coeffs {
            out.insert(*d, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(d, c)| (*d, c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Multiplication by `t^n`.
    pub fn shift(&self, n: i64) -> Self {
        LaurentPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(d, c)| (*d + n, c.clone()))
                .collect(),
        }
    }

    /// Highest degree whose coefficient has a nonzero sign, with that sign.
    /// Entries of undecided sign propagate the failure.
    pub fn leading(&self) -> Result<Option<(i64, Ordering)>> {
        for (d, c) in self.coeffs.iter().rev() {
            match c.sign()? {
                Ordering::Equal => continue,
                s => return Ok(Some((*d, s))),
            }
        }
        Ok(None)
    }

    /// The polynomial with the entry at `deg` removed. Structural, so it is
    /// safe on lazy carriers where subtracting a value from itself would
    /// force an unbounded cancellation.
    pub fn without(&self, deg: i64) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.remove(&deg);
        LaurentPoly { coeffs }
    }

    /// Keeps only the entries of degree at most `deg`.
    fn drop_above(&self, deg: i64) -> Self {
        LaurentPoly {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(d, _)| **d <= deg)
                .map(|(d, c)| (*d, c.clone()))
                .collect(),
        }
    }

    /// Inserts without a vanishing check, for lazy carriers whose zero test
    /// would force an unbounded scan. Any existing entry is merged.
    pub fn insert_unchecked(&mut self, deg: i64, c: K) {
        let merged = match self.coeffs.remove(&deg) {
            Some(old) => old.add(&c),
            None => c,
        };
        self.coeffs.insert(deg, merged);
    }
}

impl<K: fmt::Debug> fmt::Debug for LaurentPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c:?})*t^{d}")?;
        }
        Ok(())
    }
}

/// Sign of `p - q` under the ring order induced by `t > K`.
pub fn laurent_compare<K: OrderedFieldValue>(
    p: &LaurentPoly<K>,
    q: &LaurentPoly<K>,
) -> Result<Ordering> {
    match p.sub(q).leading()? {
        None => Ok(Ordering::Equal),
        Some((_, sign)) => Ok(sign),
    }
}

/// A pair in the lexicographic product of the integers with the Laurent
/// polynomials supported in degrees <= 0.
#[derive(Clone, Debug)]
pub struct LexPair<K> {
    pub level: i64,
    pub tail: LaurentPoly<K>,
}

impl<K: OrderedFieldValue> LexPair<K> {
    pub fn new(level: i64, tail: LaurentPoly<K>) -> Self {
        debug_assert!(tail.iter_desc().all(|(d, _)| d <= 0));
        LexPair { level, tail }
    }
}

/// Lexicographic comparison: by level, then by the tail polynomial.
pub fn lex_compare<K: OrderedFieldValue>(a: &LexPair<K>, b: &LexPair<K>) -> Result<Ordering> {
    match a.level.cmp(&b.level) {
        Ordering::Equal => laurent_compare(&a.tail, &b.tail),
        ord => Ok(ord),
    }
}

/// Order isomorphism from the whole group onto lexicographic pairs.
///
/// Degree-`n` polynomials with positive leading coefficient `c` go to
/// `(n, t^{-n} rest + from_positive(c))`; with negative leading coefficient
/// to `(-n, t^{-n} rest - from_positive(-c))`; degrees <= 0 go to
/// `(0, itself)`.
pub fn encode_lex<K: OrderedFieldValue>(p: &LaurentPoly<K>) -> Result<LexPair<K>> {
    let lead = p.leading()?;
    match lead {
        None => Ok(LexPair::new(0, LaurentPoly::zero())),
        Some((n, _)) if n <= 0 => Ok(LexPair::new(0, p.drop_above(0))),
        Some((n, sign)) => {
            let c = p.coeff(n).expect("leading coefficient").clone();
            let mut tail = p.drop_above(n).without(n).shift(-n);
            if sign == Ordering::Greater {
                tail.insert(0, from_positive(&c)?);
                Ok(LexPair::new(n, tail))
            } else {
                tail.insert(0, from_positive(&c.neg())?.neg());
                Ok(LexPair::new(-n, tail))
            }
        }
    }
}

/// Inverse of [`encode_lex`].
pub fn decode_lex<K: OrderedFieldValue>(z: &LexPair<K>) -> Result<LaurentPoly<K>> {
    let n = z.level;
    if n == 0 {
        return Ok(z.tail.clone());
    }
    let q0 = z
        .tail
        .coeff(0)
        .cloned()
        .unwrap_or_else(K::zero);
    let rest = z.tail.without(0);
    if n > 0 {
        let c = to_positive(&q0)?;
        let mut out = rest.shift(n);
        out.insert_unchecked(n, c);
        Ok(out)
    } else {
        let c = to_positive(&q0.neg())?;
        let mut out = rest.shift(-n);
        out.insert_unchecked(-n, c.neg());
        Ok(out)
    }
}

/// Order isomorphism from the positive cone onto lexicographic pairs:
/// `rest + c t^n -> (n, t^{-n} rest + from_positive(c))` for any leading
/// degree `n` with `c > 0`. Fails on non-positive input.
pub fn encode_lex_positive<K: OrderedFieldValue>(p: &LaurentPoly<K>) -> Result<LexPair<K>> {
    match p.leading()? {
        Some((n, Ordering::Greater)) => {
            let c = p.coeff(n).expect("leading coefficient").clone();
            let mut tail = p.drop_above(n).without(n).shift(-n);
            tail.insert(0, from_positive(&c)?);
            Ok(LexPair::new(n, tail))
        }
        _ => Err(Error::NonPositive),
    }
}

/// Inverse of [`encode_lex_positive`]; always lands in the positive cone.
pub fn decode_lex_positive<K: OrderedFieldValue>(z: &LexPair<K>) -> Result<LaurentPoly<K>> {
    let q0 = z
        .tail
        .coeff(0)
        .cloned()
        .unwrap_or_else(K::zero);
    let c = to_positive(&q0)?;
    let mut out = z.tail.without(0).shift(z.level);
    out.insert_unchecked(z.level, c);
    Ok(out)
}

/// Order isomorphism from the additive group of Laurent polynomials onto
/// its positive cone.
pub fn laurent_to_positive<K: OrderedFieldValue>(p: &LaurentPoly<K>) -> Result<LaurentPoly<K>> {
    decode_lex_positive(&encode_lex(p)?)
}

/// Inverse of [`laurent_to_positive`].
pub fn laurent_from_positive<K: OrderedFieldValue>(
    p: &LaurentPoly<K>,
) -> Result<LaurentPoly<K>> {
    decode_lex(&encode_lex_positive(p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Coeff;

    type P = LaurentPoly<Coeff>;

    fn q(n: i64) -> Coeff {
        Coeff::from_int(n)
    }

    fn poly(pairs: &[(i64, i64)]) -> P {
        P::from_pairs(pairs.iter().map(|&(d, c)| (d, q(c))))
    }

    fn assert_poly(p: &P, pairs: &[(i64, Coeff)]) {
        let got: Vec<(i64, Coeff)> = p.iter_desc().map(|(d, c)| (d, c.clone())).collect();
        assert_eq!(got, pairs.to_vec());
    }

    #[test]
    fn ring_order() {
        // t exceeds every constant.
        assert_eq!(
            laurent_compare(&poly(&[(1, 1)]), &poly(&[(0, 1000)])).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            laurent_compare(&poly(&[(2, 3), (-1, 1)]), &poly(&[(2, 3)])).unwrap(),
            Ordering::Greater
        );
        let p = poly(&[(2, 3), (0, -1)]);
        assert_eq!(laurent_compare(&p, &p).unwrap(), Ordering::Equal);
    }

    #[test]
    fn encode_positive_leading() {
        // 3t^2 + t^-1 -> (2, t^-3 + from_positive(3)) = (2, t^-3 + 2).
        let z = encode_lex(&poly(&[(2, 3), (-1, 1)])).unwrap();
        assert_eq!(z.level, 2);
        assert_poly(&z.tail, &[(0, q(2)), (-3, q(1))]);
    }

    #[test]
    fn encode_zero_and_negative() {
        let z = encode_lex(&P::zero()).unwrap();
        assert_eq!(z.level, 0);
        assert!(z.tail.is_empty());
        // -t -> (-1, -from_positive(1)) = (-1, 0).
        let z = encode_lex(&poly(&[(1, -1)])).unwrap();
        assert_eq!(z.level, -1);
        assert!(z.tail.is_empty());
    }

    #[test]
    fn decode_positive_examples() {
        // (0, 0) -> 1, (-1, 0) -> t^-1, (1, 0) -> t.
        let one = decode_lex_positive(&LexPair::new(0, P::zero())).unwrap();
        assert_poly(&one, &[(0, q(1))]);
        let tm1 = decode_lex_positive(&LexPair::new(-1, P::zero())).unwrap();
        assert_poly(&tm1, &[(-1, q(1))]);
        let t = decode_lex_positive(&LexPair::new(1, P::zero())).unwrap();
        assert_poly(&t, &[(1, q(1))]);
    }

    #[test]
    fn positive_cone_map_examples() {
        let one = laurent_to_positive(&P::zero()).unwrap();
        assert_poly(&one, &[(0, q(1))]);
        let t = laurent_to_positive(&poly(&[(1, 1)])).unwrap();
        assert_poly(&t, &[(1, q(1))]);
        let tm1 = laurent_to_positive(&poly(&[(1, -1)])).unwrap();
        assert_poly(&tm1, &[(-1, q(1))]);
    }

    #[test]
    fn round_trips_on_a_grid() {
        let grid = [-2i64, -1, 0, 1, 2];
        for a in grid {
            for b in grid {
                for c in grid {
                    let p = poly(&[(1, a), (0, b), (-1, c)]);
                    let img = laurent_to_positive(&p).unwrap();
                    assert_eq!(
                        img.leading().unwrap().map(|(_, s)| s),
                        Some(Ordering::Greater),
                        "image not positive for {p:?}"
                    );
                    let back = laurent_from_positive(&img).unwrap();
                    assert_eq!(laurent_compare(&back, &p).unwrap(), Ordering::Equal);
                    // For input degrees in [-n, n] the image degrees lie in
                    // [-3n, n]: a negative leading degree -m contributes
                    // down to -2m-n. The bound is sharp at m = n.
                    for (d, _) in img.iter_desc() {
                        assert!((-3..=1).contains(&d), "degree {d} outside window");
                    }
                }
            }
        }
        // Sharpness witness for the lower bound.
        let witness = laurent_to_positive(&poly(&[(1, -1), (-1, 1)])).unwrap();
        assert!(witness.coeff(-3).is_some());
    }

    #[test]
    fn encodings_preserve_order() {
        let polys: Vec<P> = {
            let grid = [-1i64, 0, 1];
            let mut out = Vec::new();
            for a in grid {
                for b in grid {
                    for c in grid {
                        out.push(poly(&[(1, a), (0, b), (-1, c)]));
                    }
                }
            }
            out
        };
        for p in &polys {
            for r in &polys {
                let ord = laurent_compare(p, r).unwrap();
                let lex = lex_compare(&encode_lex(p).unwrap(), &encode_lex(r).unwrap()).unwrap();
                assert_eq!(ord, lex, "lex encoding broke order for {p:?} vs {r:?}");
                let img = lex_compare(
                    &encode_lex_positive(&laurent_to_positive(p).unwrap()).unwrap(),
                    &encode_lex_positive(&laurent_to_positive(r).unwrap()).unwrap(),
                )
                .unwrap();
                assert_eq!(ord, img, "positive-cone map broke order");
            }
        }
    }

    #[test]
    fn positive_encode_rejects_nonpositive() {
        assert_eq!(
            encode_lex_positive(&P::zero()).unwrap_err(),
            Error::NonPositive
        );
        assert_eq!(
            encode_lex_positive(&poly(&[(3, -1)])).unwrap_err(),
            Error::NonPositive
        );
    }
}
