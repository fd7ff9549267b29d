//! The log-exp series layer.
//!
//! A [`TSeries`] is a lazy Hahn series over [`TMonomial`]s together with two
//! pieces of declared metadata: a [`BoundIndex`] naming a generated bounded
//! subfield the value lives in (whose depth component is also the
//! representation window: every monomial of the stream uses that base atom),
//! and the support class inherited from the underlying stream.
//!
//! Besides field arithmetic this module provides the exponential and the
//! logarithm. Both are total on the fragment the rest of the kernel needs:
//! `texp` accepts any argument with zero constant part, `tlog` any value
//! with leading coefficient one. The excluded cases would require exp or
//! log of a nonzero rational, which is irrational and not representable.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::index::BoundIndex;
use crate::monomial::TMonomial;
use crate::rational::Coeff;
use crate::series::{self, MonomialKey, Series, SupportClass, Term};

/// A lazy log-exp series with declared bound index and support class.
#[derive(Clone, Debug)]
pub struct TSeries {
    stream: Series<TMonomial>,
    index: BoundIndex,
}

impl TSeries {
    pub(crate) fn raw(stream: Series<TMonomial>, index: BoundIndex) -> Self {
        TSeries { stream, index }
    }

    /// The zero series represented over window `k`.
    pub fn zero_at(k: i64) -> Self {
        TSeries {
            stream: Series::empty(),
            index: BoundIndex::new(-1, k),
        }
    }

    pub fn zero() -> Self {
        TSeries::zero_at(0)
    }

    pub fn constant(c: Coeff) -> Self {
        TSeries {
            stream: Series::constant(c),
            index: BoundIndex::constants(),
        }
    }

    pub fn one() -> Self {
        TSeries::constant(Coeff::one())
    }

    /// The variable `x`.
    pub fn var() -> Self {
        TSeries::atom_power_series(0, Coeff::one())
    }

    /// The iterated-log atom `x_k`.
    pub fn log_atom(k: i64) -> Self {
        TSeries::atom_power_series(k, Coeff::one())
    }

    /// The pure power `x_k^s` as a series.
    pub fn atom_power_series(k: i64, s: Coeff) -> Self {
        if s.is_zero() {
            return TSeries {
                stream: Series::one(),
                index: BoundIndex::constants(),
            };
        }
        let class = if s.is_positive() {
            SupportClass::PurelyInfinite
        } else {
            SupportClass::Infinitesimal
        };
        TSeries {
            stream: Series::from_terms(vec![Term::new(
                Coeff::one(),
                TMonomial::atom_power(k, s),
            )])
            .classified(class),
            index: BoundIndex::new(0, k),
        }
    }

    /// A single monomial with coefficient one. The caller supplies the
    /// index, which must be sound for the monomial.
    pub fn monomial_series(m: TMonomial, index: BoundIndex) -> Self {
        debug_assert_eq!(m.base(), index.k);
        let class = match m.try_cmp(&TMonomial::one_at(m.base())) {
            Ok(Ordering::Greater) => SupportClass::PurelyInfinite,
            Ok(Ordering::Less) => SupportClass::Infinitesimal,
            Ok(Ordering::Equal) => SupportClass::AtMostOne,
            Err(_) => SupportClass::Mixed,
        };
        TSeries {
            stream: Series::from_terms(vec![Term::new(Coeff::one(), m)]).classified(class),
            index,
        }
    }

    /// Builds a series from terms already sorted in strictly decreasing
    /// monomial order, all over the window `index.k`.
    pub fn from_sorted_terms(
        terms: Vec<Term<TMonomial>>,
        index: BoundIndex,
        class: SupportClass,
    ) -> Self {
        debug_assert!(terms.iter().all(|t| t.mono.base() == index.k));
        TSeries {
            stream: Series::from_terms(terms).classified(class),
            index,
        }
    }

    pub fn stream(&self) -> &Series<TMonomial> {
        &self.stream
    }

    /// The declared bound index; its depth component is the representation
    /// window of the stream.
    pub fn index(&self) -> BoundIndex {
        self.index
    }

    pub fn window(&self) -> i64 {
        self.index.k
    }

    pub fn class(&self) -> SupportClass {
        self.stream.class()
    }

    pub fn with_class(&self, class: SupportClass) -> TSeries {
        TSeries {
            stream: self.stream.classified(class),
            index: self.index,
        }
    }

    pub fn term(&self, i: usize) -> Result<Option<Term<TMonomial>>> {
        self.stream.term(i)
    }

    pub fn leading(&self) -> Result<Term<TMonomial>> {
        self.stream.leading()
    }

    pub fn is_empty(&self) -> Result<bool> {
        self.stream.is_empty()
    }

    pub fn truncate(&self, depth: usize) -> Result<(Vec<Term<TMonomial>>, bool)> {
        self.stream.truncate(depth)
    }

    pub fn neg(&self) -> TSeries {
        TSeries {
            stream: self.stream.neg(),
            index: self.index,
        }
    }

    pub fn scale(&self, c: &Coeff) -> TSeries {
        TSeries {
            stream: self.stream.scale(c),
            index: self.index,
        }
    }

    pub fn add(&self, other: &TSeries) -> TSeries {
        let k = self.window().max(other.window());
        let a = embed_to_window(self, k);
        let b = embed_to_window(other, k);
        TSeries {
            stream: a.stream.add(&b.stream),
            index: a.index.join(&b.index),
        }
    }

    pub fn sub(&self, other: &TSeries) -> TSeries {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &TSeries) -> TSeries {
        let k = self.window().max(other.window());
        let a = embed_to_window(self, k);
        let b = embed_to_window(other, k);
        TSeries {
            stream: a.stream.mul(&b.stream),
            index: a.index.join(&b.index),
        }
    }

    /// Termwise product with a single term. `extra` is joined into the
    /// declared index to account for the monomial.
    pub(crate) fn mul_term(&self, t: &Term<TMonomial>, extra: BoundIndex) -> TSeries {
        let k = self.window().max(t.mono.base());
        let f = embed_to_window(self, k);
        let m = embed_mono(&t.mono, k);
        TSeries {
            stream: f.stream.mul_term(&Term::new(t.coeff.clone(), m)),
            index: f.index.join(&extra),
        }
    }

    pub fn inverse(&self) -> Result<TSeries> {
        let lead = self.term(0)?.ok_or(Error::ZeroDivision)?;
        let stream = self.stream.inverse()?;
        let class = match lead.mono.try_cmp(&TMonomial::one_at(lead.mono.base())) {
            Ok(Ordering::Greater) => SupportClass::Infinitesimal,
            Ok(Ordering::Equal) => SupportClass::AtMostOne,
            _ => SupportClass::Mixed,
        };
        Ok(TSeries {
            stream: stream.classified(class),
            index: self.index,
        })
    }

    /// Splits into the purely infinite part, the constant and the
    /// infinitesimal part. The parts re-sum to the series.
    pub fn decompose(&self) -> Result<(TSeries, Coeff, TSeries)> {
        let (up, r, eps) = self.stream.decompose()?;
        Ok((
            TSeries {
                stream: up,
                index: self.index,
            },
            r,
            TSeries {
                stream: eps,
                index: self.index,
            },
        ))
    }
}

/// Re-expresses a series over a deeper window without changing its value.
/// Each step rewrites `x_k^s -> exp(s * x_{k+1})`.
pub(crate) fn embed_to_window(f: &TSeries, k: i64) -> TSeries {
    debug_assert!(k >= f.window());
    if k == f.window() {
        return f.clone();
    }
    let class = f.class();
    let stream = f
        .stream
        .map_monomials(move |m| Ok(embed_mono(m, k)))
        .classified(class);
    TSeries {
        stream,
        index: f.index.embedded_to(k),
    }
}

/// The monomial re-expressed over a deeper base.
pub(crate) fn embed_mono(m: &TMonomial, k: i64) -> TMonomial {
    debug_assert!(k >= m.base());
    let mut cur = m.clone();
    while cur.base() < k {
        cur = embed_mono_step(&cur);
    }
    cur
}

/// One embedding step: `x_k^s exp(g)  ->  exp(g' + s x_{k+1})` over the
/// window `k+1`. The atom term goes last: every monomial of `g'` exceeds
/// each power of `x_{k+1}`.
fn embed_mono_step(m: &TMonomial) -> TMonomial {
    let k = m.base();
    let arg = embed_to_window(m.arg(), k + 1);
    let full = if m.power().is_zero() {
        arg
    } else {
        let atom = TSeries::from_sorted_terms(
            vec![Term::new(
                m.power().clone(),
                TMonomial::atom_power(k + 1, Coeff::one()),
            )],
            BoundIndex::new(0, k + 1),
            SupportClass::PurelyInfinite,
        );
        concat_infinite(&arg, &atom)
    };
    TMonomial::new(k + 1, Coeff::zero(), full)
}

/// Concatenation of two purely infinite series known to be in order. The
/// parts may be represented over different windows.
pub(crate) fn concat_infinite(first: &TSeries, second: &TSeries) -> TSeries {
    TSeries {
        stream: series::concat(first.stream(), second.stream())
            .classified(SupportClass::PurelyInfinite),
        index: first.index.join(&second.index),
    }
}

/// Re-expresses `f` over the target index. Fails if the target does not
/// contain the declared index of `f`. The result's declared index is the
/// target.
pub fn embed(f: &TSeries, target: BoundIndex) -> Result<TSeries> {
    if target.k < f.index.k || f.index.embedded_to(target.k).n > target.n {
        return Err(Error::IndexTooSmall {
            target,
            minimal: f.index,
        });
    }
    let g = embed_to_window(f, target.k);
    Ok(TSeries {
        stream: g.stream,
        index: target,
    })
}

/// Order comparison of monomials; embeds to a common base first.
pub fn monomial_compare(a: &TMonomial, b: &TMonomial) -> Result<Ordering> {
    a.try_cmp(b)
}

/// Sign of `f - g` decided within `depth` stream positions.
pub fn compare(f: &TSeries, g: &TSeries, depth: usize) -> Result<Ordering> {
    let k = f.window().max(g.window());
    let a = embed_to_window(f, k);
    let b = embed_to_window(g, k);
    series::compare(a.stream(), b.stream(), depth)
}

pub fn sign(f: &TSeries) -> Result<Ordering> {
    series::sign(f.stream())
}

/// Exact equality of the first `depth` terms, after embedding to a common
/// window. `Ok(true)` also when both streams end before `depth`.
pub fn prefix_equal(f: &TSeries, g: &TSeries, depth: usize) -> Result<bool> {
    let k = f.window().max(g.window());
    let a = embed_to_window(f, k);
    let b = embed_to_window(g, k);
    for i in 0..depth {
        match (a.term(i)?, b.term(i)?) {
            (None, None) => return Ok(true),
            (Some(s), Some(t)) => {
                if s.coeff != t.coeff || s.mono.try_cmp(&t.mono)? != Ordering::Equal {
                    return Ok(false);
                }
            }
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Whether every monomial of the forced prefix is infinite and the stream
/// as a whole is known to stay infinite (by declared class or exhaustion).
pub fn is_purely_infinite(f: &TSeries, depth: usize) -> Result<bool> {
    let one = TMonomial::one_at(f.window());
    for i in 0..depth {
        match f.term(i)? {
            None => return Ok(true),
            Some(t) => {
                if t.mono.try_cmp(&one)? != Ordering::Greater {
                    return Ok(false);
                }
            }
        }
    }
    Ok(f.class() == SupportClass::PurelyInfinite)
}

/// The exponential.
///
/// `exp(f) = exp(up) * exp(r) * sum eps^n / n!` for the decomposition
/// `f = up + r + eps`; `exp(up)` is a single monomial with exponent `up`.
/// Rejects a nonzero constant part `r`, whose exponential would be
/// irrational.
pub fn texp(f: &TSeries) -> Result<TSeries> {
    let (up, r, eps) = f.decompose()?;
    if !r.is_zero() {
        return Err(Error::NonRepresentableConstant);
    }
    let unit = series::sum_powers(eps.stream(), 0, Coeff::inv_factorial)?;
    if up.is_empty()? {
        return Ok(TSeries {
            stream: unit,
            index: f.index,
        });
    }
    let mono = TMonomial::exp_of(up);
    let index = f.index.exp();
    Ok(TSeries {
        stream: unit,
        index: f.index,
    }
    .mul_term(&Term::new(Coeff::one(), mono), index))
}

/// The logarithm of a single monomial: `s * x_{k+1} + g`, represented over
/// the window `k+1` when the atom power is present and over `k` otherwise.
pub fn mono_log(m: &TMonomial) -> TSeries {
    if m.power().is_zero() {
        return m.arg().clone();
    }
    let k = m.base();
    let head = embed_to_window(m.arg(), k + 1);
    let atom = TSeries::from_sorted_terms(
        vec![Term::new(
            m.power().clone(),
            TMonomial::atom_power(k + 1, Coeff::one()),
        )],
        BoundIndex::new(0, k + 1),
        SupportClass::PurelyInfinite,
    );
    concat_infinite(&head, &atom)
}

/// The logarithm.
///
/// `log f = log(lm f) + log(lc f) + sum (-1)^(n+1) eps^n / n` with
/// `eps = (f - lt f)/lt f`. Requires `f > 0` with leading coefficient one;
/// a general positive leading coefficient would contribute the irrational
/// constant `log(lc f)`.
pub fn tlog(f: &TSeries) -> Result<TSeries> {
    let lead = f.term(0)?.ok_or(Error::NonPositive)?;
    if lead.coeff.is_negative() {
        return Err(Error::NonPositive);
    }
    if !lead.coeff.is_one() {
        return Err(Error::NonRepresentableConstant);
    }
    let lead_inv = Term::new(Coeff::one(), lead.mono.group_inv());
    let eps = f
        .stream
        .suffix(1)
        .mul_term(&lead_inv)
        .classified(SupportClass::Infinitesimal);
    let mercator = series::sum_powers(&eps, 1, |n| {
        let sign = if n % 2 == 1 { 1 } else { -1 };
        &Coeff::from_int(sign) / &Coeff::from_int(n as i64)
    })?;
    let mercator = TSeries {
        stream: mercator,
        index: f.index,
    };
    if lead.mono.is_identity()? {
        return Ok(mercator);
    }
    let head = mono_log(&lead.mono);
    let k = head.window();
    let tail = embed_to_window(&mercator, k);
    Ok(TSeries {
        stream: series::concat(head.stream(), tail.stream())
            .classified(SupportClass::Mixed),
        index: head.index.join(&tail.index),
    })
}

/// `f^g = exp(g log f)`, with the preconditions of `tlog` and `texp`.
pub fn tpow(f: &TSeries, g: &TSeries) -> Result<TSeries> {
    let lf = tlog(f)?;
    texp(&g.mul(&lf))
}

/// The automorphism substituting the variable by its `j`-th exponential
/// iterate (`j = 1` sends `x` to `exp x`, `j = -1` to `log x`).
///
/// Atoms of depth at least `j` shift; shallower atoms become exponential
/// towers. Sums, products and exponentials are preserved, which the test
/// suite checks rather than assumes.
pub fn subst_exp_iterate(j: i64, f: &TSeries) -> TSeries {
    if j == 0 {
        return f.clone();
    }
    let class = f.class();
    let stream = f
        .stream
        .map_monomials(move |m| subst_mono(j, m))
        .classified(class);
    TSeries {
        stream,
        index: f.index.subst(j),
    }
}

fn subst_mono(j: i64, m: &TMonomial) -> Result<TMonomial> {
    if m.base() >= j {
        let arg = subst_exp_iterate(j, m.arg());
        Ok(TMonomial::new(m.base() - j, m.power().clone(), arg))
    } else {
        // The base atom maps to exp_{j-k}(x); its log is the tower one
        // step lower.
        let tower = tower_series(j - m.base() - 1);
        let arg = tower.scale(m.power()).add(&subst_exp_iterate(j, m.arg()));
        Ok(TMonomial::new(0, Coeff::zero(), arg))
    }
}

/// `exp_h(x)` as a series over window 0.
pub fn tower_series(h: i64) -> TSeries {
    debug_assert!(h >= 0);
    if h == 0 {
        return TSeries::var();
    }
    let inner = tower_series(h - 1);
    TSeries::monomial_series(TMonomial::exp_of(inner), BoundIndex::new(h, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> TSeries {
        TSeries::var()
    }

    fn int(n: i64) -> Coeff {
        Coeff::from_int(n)
    }

    /// exp(x * exp(-x)) = sum x^n exp(-n x) / n!.
    fn exp_small() -> TSeries {
        let arg = x().mul(&texp(&x().neg()).unwrap());
        texp(&arg).unwrap()
    }

    #[test]
    fn exp_basics() {
        assert!(prefix_equal(&texp(&TSeries::zero()).unwrap(), &TSeries::one(), 4).unwrap());
        // exp of a purely infinite argument is a single monomial.
        let e = texp(&x().mul(&x())).unwrap();
        let (terms, truncated) = e.truncate(4).unwrap();
        assert!(!truncated);
        assert_eq!(terms.len(), 1);
        assert!(terms[0].coeff.is_one());
        assert!(prefix_equal(terms[0].mono.arg(), &x().mul(&x()), 4).unwrap());
        // exp(1) has a nonzero constant part.
        assert_eq!(
            texp(&TSeries::one()).unwrap_err(),
            Error::NonRepresentableConstant
        );
    }

    #[test]
    fn exp_of_small_product_matches_hand_expansion() {
        let e = exp_small();
        assert_eq!(e.index(), BoundIndex::new(1, 0));
        let (terms, truncated) = e.truncate(4).unwrap();
        assert!(truncated);
        for (n, t) in terms.iter().enumerate() {
            let n = n as i64;
            assert_eq!(t.coeff, Coeff::inv_factorial(n as u32));
            assert_eq!(t.mono.power(), &int(n));
            let want = x().scale(&int(-n));
            assert!(prefix_equal(t.mono.arg(), &want, 4).unwrap());
        }
    }

    #[test]
    fn log_basics() {
        assert!(tlog(&TSeries::one()).unwrap().is_empty().unwrap());
        // log(exp(x^2)) = x^2.
        let e = texp(&x().mul(&x())).unwrap();
        assert!(prefix_equal(&tlog(&e).unwrap(), &x().mul(&x()), 4).unwrap());
        assert_eq!(tlog(&TSeries::zero()).unwrap_err(), Error::NonPositive);
        assert_eq!(
            tlog(&x().scale(&int(-1))).unwrap_err(),
            Error::NonPositive
        );
        assert_eq!(
            tlog(&x().scale(&int(2))).unwrap_err(),
            Error::NonRepresentableConstant
        );
    }

    #[test]
    fn log_mercator_expansion() {
        // log(x (1 + 1/x)) = log x + 1/x - 1/(2x^2) + ...
        let f = x().mul(&TSeries::one().add(&x().inverse().unwrap()));
        let lf = tlog(&f).unwrap();
        let (terms, _) = lf.truncate(3).unwrap();
        assert_eq!(terms.len(), 3);
        // First term is the atom log x over window 1.
        assert_eq!(terms[0].coeff, int(1));
        assert_eq!(terms[0].mono.base(), 1);
        assert_eq!(terms[0].mono.power(), &int(1));
        assert_eq!(terms[1].coeff, int(1));
        assert_eq!(terms[2].coeff, Coeff::ratio(-1, 2));
        // Round trip back through exp.
        assert!(prefix_equal(&texp(&lf).unwrap(), &f, 6).unwrap());
    }

    #[test]
    fn pow_cases() {
        // x^2 via exp(2 log x) agrees with the direct monomial.
        let direct = TSeries::atom_power_series(0, int(2));
        let via = tpow(&x(), &TSeries::constant(int(2))).unwrap();
        assert!(prefix_equal(&via, &direct, 4).unwrap());
        // f^1 = f.
        let f = x().add(&TSeries::one());
        assert!(prefix_equal(&tpow(&f, &TSeries::one()).unwrap(), &f, 6).unwrap());
        // x^x = exp(x log x): one monomial with exponent x * x_1.
        let p = tpow(&x(), &x()).unwrap();
        let (terms, truncated) = p.truncate(2).unwrap();
        assert!(!truncated);
        assert_eq!(terms.len(), 1);
        let arg = terms[0].mono.arg();
        let want = embed_to_window(&x(), 1).mul(&TSeries::log_atom(1));
        assert!(prefix_equal(arg, &want, 4).unwrap());
    }

    #[test]
    fn embedding_and_indices() {
        // x over window 1 is exp(1 * x_1).
        let e = embed(&x(), BoundIndex::new(1, 1)).unwrap();
        assert_eq!(e.index(), BoundIndex::new(1, 1));
        let t = e.leading().unwrap();
        assert_eq!(t.mono.base(), 1);
        assert!(t.mono.power().is_zero());
        let (arg_terms, _) = t.mono.arg().truncate(3).unwrap();
        assert_eq!(arg_terms.len(), 1);
        assert_eq!(arg_terms[0].mono.power(), &int(1));
        // Identity embedding.
        let same = embed(&x(), BoundIndex::new(0, 0)).unwrap();
        assert!(prefix_equal(&same, &x(), 2).unwrap());
        // Embedded values stay equal.
        assert_eq!(compare(&e, &x(), 4).unwrap(), Ordering::Equal);
        // Too-small target.
        assert!(matches!(
            embed(&exp_small(), BoundIndex::new(0, 0)),
            Err(Error::IndexTooSmall { .. })
        ));
        // log(x)^2 re-expressed over window 2.
        let l1sq = TSeries::atom_power_series(1, int(2));
        let deep = embed(&l1sq, BoundIndex::new(1, 2)).unwrap();
        assert_eq!(compare(&deep, &l1sq, 4).unwrap(), Ordering::Equal);
    }

    #[test]
    fn monomial_ordering() {
        // exp(x^2) > x^100.
        let big = TMonomial::exp_of(x().mul(&x()));
        let pow = TMonomial::atom_power(0, int(100));
        assert_eq!(monomial_compare(&big, &pow).unwrap(), Ordering::Greater);
        // x^3 > x^2.
        assert_eq!(
            monomial_compare(
                &TMonomial::atom_power(0, int(3)),
                &TMonomial::atom_power(0, int(2))
            )
            .unwrap(),
            Ordering::Greater
        );
        let m = TMonomial::atom_power(0, int(3));
        assert_eq!(monomial_compare(&m, &m).unwrap(), Ordering::Equal);
        // Cross-window: x > log(x)^5.
        assert_eq!(
            monomial_compare(
                &TMonomial::atom_power(0, int(1)),
                &TMonomial::atom_power(1, int(5))
            )
            .unwrap(),
            Ordering::Greater
        );
    }

    #[test]
    fn purely_infinite_checks() {
        let f = x().add(&x().mul(&x()));
        assert!(is_purely_infinite(&f, 8).unwrap());
        assert!(!is_purely_infinite(&x().add(&TSeries::one()), 8).unwrap());
        assert!(is_purely_infinite(&TSeries::zero(), 8).unwrap());
    }

    #[test]
    fn substitution_cases() {
        let f = x().add(&TSeries::log_atom(1).scale(&int(3)));
        assert!(prefix_equal(&subst_exp_iterate(0, &f), &f, 4).unwrap());
        // log x -> x.
        let s = subst_exp_iterate(1, &TSeries::log_atom(1));
        assert!(prefix_equal(&s, &x(), 4).unwrap());
        assert_eq!(s.index(), BoundIndex::new(0, 0));
        // x -> exp x.
        let e = subst_exp_iterate(1, &x());
        let (terms, _) = e.truncate(2).unwrap();
        assert_eq!(terms.len(), 1);
        assert!(terms[0].mono.power().is_zero());
        assert!(prefix_equal(terms[0].mono.arg(), &x(), 2).unwrap());
        assert_eq!(e.index(), BoundIndex::new(1, 0));
        // Substitutions compose to the identity.
        let g = exp_small();
        let back = subst_exp_iterate(2, &subst_exp_iterate(-2, &g));
        assert!(prefix_equal(&back, &g, 4).unwrap());
    }

    #[test]
    fn subst_preserves_ring_and_exp() {
        let a = x().add(&TSeries::one());
        let b = TSeries::log_atom(1).add(&x().inverse().unwrap());
        for j in [-2i64, -1, 1, 2] {
            let sum = prefix_equal(
                &subst_exp_iterate(j, &a.add(&b)),
                &subst_exp_iterate(j, &a).add(&subst_exp_iterate(j, &b)),
                5,
            )
            .unwrap();
            assert!(sum, "sum not preserved at j = {j}");
            let prod = prefix_equal(
                &subst_exp_iterate(j, &a.mul(&b)),
                &subst_exp_iterate(j, &a).mul(&subst_exp_iterate(j, &b)),
                5,
            )
            .unwrap();
            assert!(prod, "product not preserved at j = {j}");
        }
        let arg = x().neg();
        let lhs = subst_exp_iterate(1, &texp(&arg).unwrap());
        let rhs = texp(&subst_exp_iterate(1, &arg)).unwrap();
        assert!(prefix_equal(&lhs, &rhs, 4).unwrap());
    }

    #[test]
    fn exp_log_round_trips() {
        // log(exp(f)) = f for admissible f, exp(log(f)) = f.
        let f = x().add(&x().inverse().unwrap().scale(&Coeff::ratio(1, 2)));
        let lf = texp(&f).unwrap();
        assert!(prefix_equal(&tlog(&lf).unwrap(), &f, 6).unwrap());
        let g = x().mul(&TSeries::one().add(&x().inverse().unwrap()));
        assert!(prefix_equal(&texp(&tlog(&g).unwrap()).unwrap(), &g, 6).unwrap());
    }

    #[test]
    fn exp_homomorphism() {
        let a = x().scale(&int(2));
        let b = x().inverse().unwrap();
        let lhs = texp(&a.add(&b)).unwrap();
        let rhs = texp(&a).unwrap().mul(&texp(&b).unwrap());
        assert!(prefix_equal(&lhs, &rhs, 6).unwrap());
    }
}
