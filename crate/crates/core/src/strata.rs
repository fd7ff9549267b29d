//! Order isomorphisms between a stratum field and its pure-level space.
//!
//! For the stratum field of height `n` over the base atom `x_k` there is an
//! isomorphism of ordered vector spaces onto the space of purely infinite
//! series whose monomials sit at exactly that height. It is built by
//! recursion on `n`:
//!
//! * height `-1` (constants): `r -> r * x_{k+1}`;
//! * height `0` (pure powers): `x_k^s -> x_k^{to_positive(s)}` termwise;
//! * height `n+1`: write each term as `c * x_k^s * exp(d + rest)` where `d`
//!   is the height-`n` block of the exponent, and map it to
//!   `c * x_k^s * exp(g(d) + rest)` with
//!   `g = iso_n . to_positive . iso_n^{-1}`.
//!
//! Coefficients and the lower part of each exponent pass through untouched;
//! only the top block moves, which is what makes the family glue across
//! strata. The glued map picks its stratum parameters from the declared
//! bound index; the tests check that the choice does not matter.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::index::BoundIndex;
use crate::levels::stratum;
use crate::limits::SCAN_FUSE;
use crate::monomial::TMonomial;
use crate::ordered_field::{from_positive, to_positive};
use crate::rational::Coeff;
use crate::series::{Generator, MonomialKey, Series, SupportClass, Term};
use crate::transseries::{concat_infinite, embed, TSeries};

/// Parameters of one stratum map: height `n >= -1` over the atom `x_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StratumParams {
    pub n: i64,
    pub k: i64,
}

impl StratumParams {
    pub fn new(n: i64, k: i64) -> Self {
        debug_assert!(n >= -1 && k >= 0);
        StratumParams { n, k }
    }

    fn index(&self) -> BoundIndex {
        BoundIndex::new(self.n, self.k)
    }
}

/// The stratum isomorphism: maps the height-`n` field over `x_k` onto the
/// purely infinite series of pure height `n`.
pub fn stratum_iso(p: StratumParams, f: &TSeries) -> Result<TSeries> {
    let f = embed(f, p.index())?;
    match p.n {
        -1 => {
            let Some(lead) = f.term(0)? else {
                return Ok(TSeries::zero_at(p.k + 1));
            };
            Ok(TSeries::atom_power_series(p.k + 1, Coeff::one()).scale(&lead.coeff))
        }
        0 => {
            let k = p.k;
            let stream = f
                .stream()
                .map_monomials(move |m| {
                    if !m.arg().is_empty()? {
                        return Err(Error::IndexTooSmall {
                            target: BoundIndex::new(0, k),
                            minimal: BoundIndex::new(1, k),
                        });
                    }
                    Ok(TMonomial::atom_power(k, to_positive(m.power())?))
                })
                .classified(SupportClass::PurelyInfinite);
            Ok(TSeries::raw(stream, BoundIndex::new(0, p.k)))
        }
        _ => Ok(TSeries::raw(
            Series::from_generator(
                SupportClass::PurelyInfinite,
                Box::new(StratumGen {
                    src: f,
                    p,
                    pos: 0,
                    cache: None,
                    inverse: false,
                }),
            ),
            p.index(),
        )),
    }
}

/// Inverse of [`stratum_iso`]: maps pure height-`n` series back into the
/// height-`n` field.
pub fn stratum_iso_inv(p: StratumParams, g: &TSeries) -> Result<TSeries> {
    match p.n {
        -1 => {
            let Some(lead) = g.term(0)? else {
                return Ok(TSeries::zero_at(p.k));
            };
            if g.term(1)?.is_some()
                || lead.mono.base() != p.k + 1
                || !lead.mono.power().is_one()
                || !lead.mono.arg().is_empty()?
            {
                return Err(Error::NotInRange);
            }
            Ok(TSeries::constant(lead.coeff))
        }
        0 => {
            let g = embed(g, p.index())?;
            let k = p.k;
            let stream = g
                .stream()
                .map_monomials(move |m| {
                    if m.base() != k || !m.arg().is_empty()? || !m.power().is_positive() {
                        return Err(Error::NotInRange);
                    }
                    Ok(TMonomial::atom_power(k, from_positive(m.power())?))
                })
                .classified(SupportClass::Mixed);
            Ok(TSeries::raw(stream, BoundIndex::new(0, p.k)))
        }
        _ => {
            let g = embed(g, p.index())?;
            Ok(TSeries::raw(
                Series::from_generator(
                    SupportClass::Mixed,
                    Box::new(StratumGen {
                        src: g,
                        p,
                        pos: 0,
                        cache: None,
                        inverse: true,
                    }),
                ),
                p.index(),
            ))
        }
    }
}

/// Splits a purely infinite exponent into its height-`want` leading block
/// (materialized; blocks of one height are consecutive) and the lazy rest.
/// Fails if a term above `want` shows up.
fn split_exponent(
    arg: &TSeries,
    want: i64,
    window: i64,
) -> Result<(Vec<Term<TMonomial>>, TSeries)> {
    let mut block = Vec::new();
    let mut j = 0usize;
    loop {
        if j > SCAN_FUSE {
            return Err(Error::Diverges { budget: SCAN_FUSE });
        }
        let Some(t) = arg.term(j)? else {
            break;
        };
        let s = stratum(&t.mono)?;
        match s.cmp(&want) {
            Ordering::Greater => {
                return Err(Error::IndexTooSmall {
                    target: BoundIndex::new(want + 1, window),
                    minimal: BoundIndex::new(s + 1, window),
                })
            }
            Ordering::Equal => {
                block.push(t);
                j += 1;
            }
            Ordering::Less => break,
        }
    }
    let rest = TSeries::raw(
        arg.stream().suffix(j).classified(SupportClass::PurelyInfinite),
        BoundIndex::new((want - 1 + window).max(-1), window),
    );
    Ok((block, rest))
}

fn blocks_equal(a: &[Term<TMonomial>], b: &[Term<TMonomial>]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(s, t)| {
            s.coeff == t.coeff
                && matches!(s.mono.try_cmp(&t.mono), Ok(Ordering::Equal))
        })
}

/// Shared generator for the stratum map and its inverse at height >= 1.
///
/// Each input term maps to one output term; consecutive terms share their
/// top exponent block, so the image of the block is cached across a run.
struct StratumGen {
    src: TSeries,
    p: StratumParams,
    pos: usize,
    cache: Option<(Vec<Term<TMonomial>>, TSeries)>,
    inverse: bool,
}

impl StratumGen {
    fn block_image(&mut self, block: &[Term<TMonomial>]) -> Result<TSeries> {
        if let Some((cached, image)) = &self.cache {
            if blocks_equal(cached, block) {
                return Ok(image.clone());
            }
        }
        let inner = StratumParams::new(self.p.n - 1, self.p.k);
        let block_series = TSeries::from_sorted_terms(
            block.to_vec(),
            BoundIndex::new(self.p.n - 1, self.p.k),
            SupportClass::PurelyInfinite,
        );
        let image = if self.inverse {
            // iso_{n-1} . from_positive . iso_{n-1}^{-1}
            let v = stratum_iso_inv(inner, &block_series)?;
            let w = from_positive(&v).map_err(|e| match e {
                Error::NonPositive => Error::NotInRange,
                other => other,
            })?;
            stratum_iso(inner, &w)?
        } else {
            // iso_{n-1} . to_positive . iso_{n-1}^{-1}
            let v = stratum_iso_inv(inner, &block_series)?;
            let w = to_positive(&v)?;
            stratum_iso(inner, &w)?
        };
        self.cache = Some((block.to_vec(), image.clone()));
        Ok(image)
    }
}

impl Generator<TMonomial> for StratumGen {
    fn next_term(&mut self) -> Result<Option<Term<TMonomial>>> {
        let Some(t) = self.src.term(self.pos)? else {
            return Ok(None);
        };
        self.pos += 1;
        let (block, rest) = split_exponent(t.mono.arg(), self.p.n - 1, self.p.k)?;
        if self.inverse && block.is_empty() {
            // Every monomial of the domain carries a positive top block.
            return Err(Error::NotInRange);
        }
        let image = self.block_image(&block)?;
        let arg = concat_infinite(&image, &rest);
        Ok(Some(Term::new(
            t.coeff,
            TMonomial::new(self.p.k, t.mono.power().clone(), arg),
        )))
    }
}

/// The glued map onto series of level exactly `n`, defined on everything
/// whose levels are at most `n`. Stratum parameters are chosen minimally
/// from the declared bound index; the value does not depend on the choice.
pub fn level_iso(n: i64, f: &TSeries) -> Result<TSeries> {
    let idx = f.index();
    if idx.level_bound() > n && !f.is_empty()? {
        return Err(Error::LevelTooHigh { max: n });
    }
    let k = idx.k.max(-n).max(0);
    stratum_iso(StratumParams::new(n + k, k), f)
}

/// Inverse of [`level_iso`] on series of level exactly `n`.
pub fn level_iso_inv(n: i64, g: &TSeries) -> Result<TSeries> {
    let idx = g.index();
    if idx.level_bound() > n && !g.is_empty()? {
        return Err(Error::LevelTooHigh { max: n });
    }
    let k = idx.k.max(-n).max(0);
    stratum_iso_inv(StratumParams::new(n + k, k), g)
}
