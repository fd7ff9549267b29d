//! The level grading of germs and per-level decomposition.
//!
//! The level of a nonzero series measures its iterated-log comparability
//! class: `level(exp_n(x)) = n`, `level(x_k) = -k`, and an element
//! asymptotic to a constant has level minus infinity. On the canonical
//! monomial shape the level is `stratum - base depth`, where the stratum
//! counts exponential nesting along leading terms only, so it is computable
//! by a short structural recursion.
//!
//! Within a purely infinite series, monomials of higher level strictly
//! exceed monomials of lower level, so levels are non-increasing along the
//! stream and a series splits into consecutive per-level blocks.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::index::BoundIndex;
use crate::limits::{HEIGHT_LIMIT, LEVEL_CAP, SCAN_FUSE};
use crate::monomial::TMonomial;
use crate::series::{Generator, Series, SupportClass, Term};
use crate::transseries::TSeries;

/// Level of a germ: an integer, or minus infinity for values asymptotic to
/// a constant.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Level {
    MinusInfinity,
    Finite(i64),
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::MinusInfinity => f.write_str("-inf"),
            Level::Finite(n) => write!(f, "{n}"),
        }
    }
}

/// Exponential nesting depth of a monomial relative to its own base atom:
/// 0 for pure atom powers, and one more than the stratum of the leading
/// monomial of the exponent otherwise.
pub fn stratum(m: &TMonomial) -> Result<i64> {
    stratum_guarded(m, 0)
}

fn stratum_guarded(m: &TMonomial, depth: usize) -> Result<i64> {
    if depth > HEIGHT_LIMIT {
        return Err(Error::Diverges {
            budget: HEIGHT_LIMIT,
        });
    }
    match m.arg().term(0)? {
        None => Ok(0),
        Some(t) => Ok(1 + stratum_guarded(&t.mono, depth + 1)?),
    }
}

/// Level of a single monomial.
pub fn monomial_level(m: &TMonomial) -> Result<Level> {
    if m.is_identity()? {
        return Ok(Level::MinusInfinity);
    }
    Ok(Level::Finite(stratum(m)? - m.base()))
}

/// Level of a nonzero series: the level of its leading monomial.
pub fn level(f: &TSeries) -> Result<Level> {
    let lead = f.term(0)?.ok_or(Error::UndefinedLevel)?;
    monomial_level(&lead.mono)
}

/// Lazy view of the terms of `f` whose monomials have level exactly `want`.
///
/// Sound only for purely infinite `f`, where levels are non-increasing
/// along the stream; the skip over higher-level blocks is budgeted.
pub fn level_component(f: &TSeries, want: i64) -> TSeries {
    let idx = f.index();
    let comp_index = BoundIndex::new((want + idx.k).max(-1), idx.k);
    TSeries::raw(
        Series::from_generator(
            SupportClass::PurelyInfinite,
            Box::new(LevelFilterGen {
                src: f.clone(),
                pos: 0,
                want,
                done: false,
            }),
        ),
        comp_index,
    )
}

struct LevelFilterGen {
    src: TSeries,
    pos: usize,
    want: i64,
    done: bool,
}

impl Generator<TMonomial> for LevelFilterGen {
    fn next_term(&mut self) -> Result<Option<Term<TMonomial>>> {
        if self.done {
            return Ok(None);
        }
        let mut skipped = 0usize;
        loop {
            let Some(t) = self.src.term(self.pos)? else {
                self.done = true;
                return Ok(None);
            };
            let Level::Finite(lv) = monomial_level(&t.mono)? else {
                return Err(Error::NotInRange);
            };
            if lv > self.want {
                self.pos += 1;
                skipped += 1;
                if skipped > SCAN_FUSE {
                    return Err(Error::Diverges { budget: SCAN_FUSE });
                }
                continue;
            }
            if lv == self.want {
                self.pos += 1;
                return Ok(Some(t));
            }
            self.done = true;
            return Ok(None);
        }
    }
}

/// Probes whether `f` has any term of level `want`, scanning at most
/// `budget` terms.
pub(crate) enum Probe {
    Present,
    Empty,
    Unknown,
}

pub(crate) fn probe_level(f: &TSeries, want: i64, budget: usize) -> Probe {
    for i in 0..budget {
        match f.term(i) {
            Ok(Some(t)) => match monomial_level(&t.mono) {
                Ok(Level::Finite(lv)) => {
                    if lv == want {
                        return Probe::Present;
                    }
                    if lv < want {
                        return Probe::Empty;
                    }
                }
                _ => return Probe::Unknown,
            },
            Ok(None) => return Probe::Empty,
            Err(_) => return Probe::Unknown,
        }
    }
    Probe::Unknown
}

/// Splits a purely infinite series into its per-level components.
///
/// Components re-sum to the input (they are consecutive blocks of the
/// stream) and stay lazy. Candidate levels come from the declared bound
/// index clamped by the leading term's level; at most [`LEVEL_CAP`]
/// components are separated.
pub fn split_levels(f: &TSeries) -> Result<BTreeMap<i64, TSeries>> {
    let mut out = BTreeMap::new();
    let Some(first) = f.term(0)? else {
        return Ok(out);
    };
    let Level::Finite(top) = monomial_level(&first.mono)? else {
        return Err(Error::NotInRange);
    };
    let lo = -f.index().k;
    let mut found = 0usize;
    for lv in (lo..=top).rev() {
        match probe_level(f, lv, SCAN_FUSE) {
            Probe::Empty => continue,
            Probe::Present | Probe::Unknown => {
                found += 1;
                if found > LEVEL_CAP {
                    return Err(Error::InfinitelyManyLevels { cap: LEVEL_CAP });
                }
                out.insert(lv, level_component(f, lv));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::cmp::Ordering;

    use super::*;
    use crate::rational::Coeff;
    use crate::transseries::{prefix_equal, texp, tower_series};

    fn x() -> TSeries {
        TSeries::var()
    }

    fn int(n: i64) -> Coeff {
        Coeff::from_int(n)
    }

    #[test]
    fn grounding_on_iterates() {
        // level(exp_n(x)) = n for towers, level(x_k) = -k for atoms.
        for n in 0..=3 {
            assert_eq!(level(&tower_series(n)).unwrap(), Level::Finite(n));
        }
        for k in 0..=3 {
            assert_eq!(
                level(&TSeries::log_atom(k)).unwrap(),
                Level::Finite(-k)
            );
        }
    }

    #[test]
    fn constants_and_zero() {
        assert_eq!(
            level(&TSeries::constant(int(7))).unwrap(),
            Level::MinusInfinity
        );
        assert_eq!(level(&TSeries::zero()).unwrap_err(), Error::UndefinedLevel);
        // An element asymptotic to a constant also has level -inf.
        let f = TSeries::one().add(&x().inverse().unwrap());
        assert_eq!(level(&f).unwrap(), Level::MinusInfinity);
    }

    #[test]
    fn powers_have_the_atom_level() {
        for s in [int(1), int(-1), int(2), Coeff::ratio(1, 2), Coeff::ratio(-1, 2)] {
            let f = TSeries::atom_power_series(0, s.clone());
            assert_eq!(level(&f).unwrap(), Level::Finite(0), "x^{s}");
        }
        assert_eq!(
            level(&TSeries::atom_power_series(1, int(3))).unwrap(),
            Level::Finite(-1)
        );
    }

    #[test]
    fn product_takes_the_max_level() {
        // level(x^2 * log x) = 0.
        let f = TSeries::atom_power_series(0, int(2)).mul(&TSeries::log_atom(1));
        assert_eq!(level(&f).unwrap(), Level::Finite(0));
        // level(exp(x) * x^5) = 1.
        let g = texp(&x()).unwrap().mul(&TSeries::atom_power_series(0, int(5)));
        assert_eq!(level(&g).unwrap(), Level::Finite(1));
    }

    #[test]
    fn split_into_blocks() {
        // exp(x) + x^2 + 3x + 5 log x splits as {1, 0, -1}.
        let f = texp(&x())
            .unwrap()
            .add(&TSeries::atom_power_series(0, int(2)))
            .add(&x().scale(&int(3)))
            .add(&TSeries::log_atom(1).scale(&int(5)));
        let parts = split_levels(&f).unwrap();
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![-1, 0, 1]);
        assert!(prefix_equal(&parts[&1], &texp(&x()).unwrap(), 4).unwrap());
        let mid = TSeries::atom_power_series(0, int(2)).add(&x().scale(&int(3)));
        assert!(prefix_equal(&parts[&0], &mid, 4).unwrap());
        assert!(
            prefix_equal(&parts[&-1], &TSeries::log_atom(1).scale(&int(5)), 4).unwrap()
        );
        // Components re-sum to the input.
        let sum = parts
            .values()
            .fold(TSeries::zero(), |acc, p| acc.add(p));
        assert!(prefix_equal(&sum, &f, 8).unwrap());
    }

    #[test]
    fn split_edge_cases() {
        assert!(split_levels(&TSeries::zero()).unwrap().is_empty());
        let parts = split_levels(&x()).unwrap();
        assert_eq!(parts.len(), 1);
        assert!(prefix_equal(&parts[&0], &x(), 2).unwrap());
    }

    #[test]
    fn level_blocks_are_ordered() {
        // A positive element of higher level exceeds anything of lower
        // level: exp(x) vs x^1000.
        let hi = texp(&x()).unwrap();
        let lo = TSeries::atom_power_series(0, int(1000));
        assert_eq!(
            crate::transseries::compare(&hi, &lo, 4).unwrap(),
            Ordering::Greater
        );
    }
}
