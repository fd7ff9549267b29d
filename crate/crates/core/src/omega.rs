//! The omega map: an order isomorphism from the additive group of series
//! onto its own group of monomials.
//!
//! The construction chains three isomorphisms:
//!
//! * [`decompose_levels`] / [`compose_levels`] identify a purely infinite
//!   series with a Laurent polynomial over the level-at-most-0 fragment:
//!   the degree-`n` coefficient is the level-`n` block pulled back through
//!   the glued stratum isomorphism and the substitution `x -> exp_n(x)`;
//! * the generic Laurent positive-cone isomorphism of [`crate::laurent`];
//! * exp and log between purely infinite series and monomials.
//!
//! Composing them gives the monomial shift [`monomial_to_infinite`], an
//! order isomorphism from the monomial group onto its cone of infinite
//! monomials. Its strongly linear termwise extension
//! [`series_to_infinite`] sends the whole field onto the purely infinite
//! subspace, and `exp` of that is the omega map.
//!
//! Every map here is bounded: [`bound_transport`] gives a sound index
//! bound for the image of any input index, which the tests check against
//! measured indices.

use std::cmp::Ordering;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::index::BoundIndex;
use crate::laurent::{decode_lex, encode_lex_positive, laurent_to_positive, LaurentPoly};
use crate::levels::{level_component, monomial_level, probe_level, Level, Probe};
use crate::limits::LEVEL_CAP;
use crate::monomial::TMonomial;
use crate::ordered_field::to_positive;
use crate::series::{MonomialKey, SupportClass};
use crate::strata::{level_iso, level_iso_inv};
use crate::transseries::{mono_log, subst_exp_iterate, TSeries};

/// Budget for the cheap emptiness probe on candidate level components.
const COMPONENT_PROBE: usize = 64;

/// Writes a purely infinite series as a Laurent polynomial over the
/// level-at-most-0 fragment: the degree-`n` coefficient is
/// `subst_{-n}(level_iso_inv(n, level-n block))`.
///
/// Candidate degrees come from the declared index clamped by the leading
/// term's level. Components whose emptiness is not cheaply refutable stay
/// as lazy (possibly zero) coefficients.
pub fn decompose_levels(g: &TSeries) -> Result<LaurentPoly<TSeries>> {
    let Some(first) = g.term(0)? else {
        return Ok(LaurentPoly::zero());
    };
    let Level::Finite(top) = monomial_level(&first.mono)? else {
        return Err(Error::NotInRange);
    };
    let lo = -g.index().k;
    let mut out = LaurentPoly::zero();
    let mut found = 0usize;
    for lv in (lo..=top).rev() {
        match probe_level(g, lv, COMPONENT_PROBE) {
            Probe::Empty => continue,
            Probe::Present | Probe::Unknown => {
                found += 1;
                if found > LEVEL_CAP {
                    return Err(Error::InfinitelyManyLevels { cap: LEVEL_CAP });
                }
                let comp = level_component(g, lv);
                let pulled = level_iso_inv(lv, &comp)?;
                out.insert_unchecked(lv, subst_exp_iterate(-lv, &pulled));
            }
        }
    }
    Ok(out)
}

/// Inverse direction: assembles the level blocks
/// `level_iso(n, subst_n(coefficient))` in descending degree order into one
/// purely infinite series.
pub fn compose_levels(p: &LaurentPoly<TSeries>) -> Result<TSeries> {
    let mut acc: Option<TSeries> = None;
    for (deg, c) in p.iter_desc() {
        let block = level_iso(deg, &subst_exp_iterate(deg, c))?;
        acc = Some(match acc {
            None => block,
            Some(prev) => crate::transseries::concat_infinite(&prev, &block),
        });
    }
    Ok(acc
        .unwrap_or_else(TSeries::zero)
        .with_class(SupportClass::PurelyInfinite))
}

fn eta_memo() -> &'static Mutex<Vec<(TMonomial, TMonomial)>> {
    static MEMO: OnceLock<Mutex<Vec<(TMonomial, TMonomial)>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(Vec::new()))
}

const ETA_MEMO_CAP: usize = 512;

fn eta_memo_lookup(m: &TMonomial) -> Option<TMonomial> {
    let memo = eta_memo().lock().expect("eta memo lock");
    memo.iter()
        .find(|(key, _)| matches!(key.try_cmp(m), Ok(Ordering::Equal)))
        .map(|(_, v)| v.clone())
}

fn eta_memo_store(m: &TMonomial, v: &TMonomial) {
    let mut memo = eta_memo().lock().expect("eta memo lock");
    if memo.len() < ETA_MEMO_CAP {
        memo.push((m.clone(), v.clone()));
    }
}

/// The monomial shift: an order isomorphism from the monomial group onto
/// the infinite monomials, `exp . compose . to-positive . decompose . log`.
///
/// Memoized per monomial: the termwise extension applies it along streams
/// where the same monomial recurs. The fill is idempotent, so concurrent
/// computation of the same key is harmless.
pub fn monomial_to_infinite(m: &TMonomial) -> Result<TMonomial> {
    if let Some(hit) = eta_memo_lookup(m) {
        return Ok(hit);
    }
    let poly = decompose_levels(&mono_log(m))?;
    let img = compose_levels(&laurent_to_positive(&poly)?)?;
    let out = TMonomial::exp_of(img);
    eta_memo_store(m, &out);
    Ok(out)
}

/// Inverse of the monomial shift, defined on infinite monomials.
pub fn monomial_from_infinite(m: &TMonomial) -> Result<TMonomial> {
    let poly = decompose_levels(&mono_log(m))?;
    let pulled = decode_lex(&encode_lex_positive(&poly)?)?;
    let img = compose_levels(&pulled)?;
    Ok(TMonomial::exp_of(img))
}

/// The strongly linear extension of the monomial shift: applies it
/// termwise, preserving coefficients. The image is purely infinite; a
/// failure of strict decrease in the image surfaces as
/// [`Error::OrderViolation`] when the prefix is forced.
pub fn series_to_infinite(f: &TSeries) -> Result<TSeries> {
    let stream = f
        .stream()
        .map_monomials(|m| monomial_to_infinite(m))
        .classified(SupportClass::PurelyInfinite);
    Ok(TSeries::raw(stream, transport_eta(f.index())))
}

/// Inverse of [`series_to_infinite`] on purely infinite series with
/// infinite monomials.
pub fn series_from_infinite(f: &TSeries) -> Result<TSeries> {
    let stream = f
        .stream()
        .map_monomials(|m| monomial_from_infinite(m))
        .classified(SupportClass::Mixed);
    Ok(TSeries::raw(stream, transport_eta_inv(f.index())))
}

/// The omega map: `f -> exp(series_to_infinite(f))`, an order isomorphism
/// from the additive group of series onto the monomial group. The zero
/// series goes to the identity monomial.
pub fn omega_map(f: &TSeries) -> Result<TMonomial> {
    Ok(TMonomial::exp_of(series_to_infinite(f)?))
}

/// Inverse of the omega map: `m -> series_from_infinite(log m)`.
pub fn omega_map_inv(m: &TMonomial) -> Result<TSeries> {
    series_from_infinite(&mono_log(m))
}

/// Shared closure types for the generic constructions.
pub type MonomialMap = Arc<dyn Fn(&TMonomial) -> Result<TMonomial> + Send + Sync>;
pub type SeriesExp = Arc<dyn Fn(&TSeries) -> Result<TMonomial> + Send + Sync>;
pub type OmegaMap = Arc<dyn Fn(&TSeries) -> Result<TMonomial> + Send + Sync>;
pub type OmegaInv = Arc<dyn Fn(&TMonomial) -> Result<TSeries> + Send + Sync>;

/// Generic construction of an omega map from any order-preserving monomial
/// shift into the infinite monomials and any exponential on purely
/// infinite series: the candidate is `exp'` of the termwise extension of
/// `eta'`. `transport` supplies a sound index bound for shifted monomials.
pub fn omega_from_monomial_map(
    eta: MonomialMap,
    exp: SeriesExp,
    transport: Arc<dyn Fn(BoundIndex) -> BoundIndex + Send + Sync>,
) -> OmegaMap {
    Arc::new(move |f: &TSeries| {
        let eta = Arc::clone(&eta);
        let stream = f
            .stream()
            .map_monomials(move |m| eta(m))
            .classified(SupportClass::PurelyInfinite);
        let lifted = TSeries::raw(stream, transport(f.index()));
        exp(&lifted)
    })
}

/// Generic construction of a monomial shift from any omega map with an
/// inverse: `m -> omega(to_positive(omega_inv(m)))`. Lands in the infinite
/// monomials because the positive shift lands in the positive cone.
pub fn monomial_map_from_omega(omega: OmegaMap, omega_inv: OmegaInv) -> MonomialMap {
    Arc::new(move |m: &TMonomial| {
        let v = omega_inv(m)?;
        omega(&to_positive(&v)?)
    })
}

// ---------------------------------------------------------------------------
// Bound transport
// ---------------------------------------------------------------------------

/// Names of the bounded maps whose index transport is tabulated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransportMap {
    /// Laurent polynomial to purely infinite series.
    ComposeLevels,
    /// Purely infinite series to Laurent polynomial.
    DecomposeLevels,
    /// The Laurent positive-cone isomorphism.
    LaurentPositive,
    /// The monomial shift.
    MonomialShift,
    /// Its strongly linear termwise extension.
    SeriesShift,
    /// The omega map.
    Omega,
}

impl FromStr for TransportMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "f" | "compose" => Ok(TransportMap::ComposeLevels),
            "finv" | "f_inv" | "f^-1" | "decompose" => Ok(TransportMap::DecomposeLevels),
            "scripth" | "laurent" => Ok(TransportMap::LaurentPositive),
            "eta" | "shift" => Ok(TransportMap::MonomialShift),
            "h" | "lift" => Ok(TransportMap::SeriesShift),
            "omega" => Ok(TransportMap::Omega),
            other => Err(Error::UnknownMap(other.to_string())),
        }
    }
}

/// Degree window and coefficient bound of a Laurent polynomial over the
/// level-at-most-0 fragment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct PolyBound {
    lo: i64,
    hi: i64,
    coeff: BoundIndex,
}

fn decompose_bound(idx: BoundIndex) -> PolyBound {
    let c = idx.n.max(0);
    PolyBound {
        lo: -idx.k,
        hi: idx.level_bound(),
        coeff: BoundIndex::new(c, c),
    }
}

/// Degrees at most double through the positive-cone isomorphism;
/// coefficients stay in their subfield.
fn laurent_bound(pb: PolyBound) -> PolyBound {
    let w = pb.lo.unsigned_abs().max(pb.hi.unsigned_abs()) as i64;
    PolyBound {
        lo: -2 * w,
        hi: 2 * w,
        coeff: pb.coeff,
    }
}

fn compose_bound(pb: PolyBound) -> BoundIndex {
    let mut out = BoundIndex::constants();
    let mut deg = pb.lo;
    while deg <= pb.hi {
        let shifted = pb.coeff.subst(deg);
        let k = shifted.k.max(-deg).max(0);
        out = out.join(&BoundIndex::new(deg + k, k));
        deg += 1;
    }
    out
}

fn mono_log_bound(idx: BoundIndex) -> BoundIndex {
    BoundIndex::new(idx.n.max(0), idx.k + 1)
}

fn transport_eta(idx: BoundIndex) -> BoundIndex {
    compose_bound(laurent_bound(decompose_bound(mono_log_bound(idx)))).exp()
}

fn transport_eta_inv(idx: BoundIndex) -> BoundIndex {
    // Same chain; the positive-cone inverse obeys the same degree bound.
    transport_eta(idx)
}

/// A sound output index bound for the named map applied to inputs bounded
/// by `idx`. Monotone in `idx`.
///
/// For the polynomial-valued maps the index encodes a degree window and a
/// coefficient field: `(n, k)` stands for degrees within
/// `[-max(|n-k|, k), max(|n-k|, k)]` and coefficients of index at most
/// `(max(n,0), max(n,0))`, which is exactly what [`decompose_levels`]
/// produces from a series of index `(n, k)`.
pub fn bound_transport(idx: BoundIndex, map: TransportMap) -> Result<BoundIndex> {
    Ok(match map {
        TransportMap::LaurentPositive => BoundIndex::new(2 * idx.n, idx.k),
        TransportMap::DecomposeLevels => {
            let pb = decompose_bound(idx);
            let w = pb.lo.unsigned_abs().max(pb.hi.unsigned_abs()) as i64;
            BoundIndex::new(pb.coeff.n.max(w), pb.coeff.k.max(w))
        }
        TransportMap::ComposeLevels => {
            let c = idx.n.max(0);
            let w = (idx.n - idx.k).abs().max(idx.k);
            compose_bound(PolyBound {
                lo: -w,
                hi: w,
                coeff: BoundIndex::new(c, c),
            })
        }
        TransportMap::MonomialShift => transport_eta(idx),
        TransportMap::SeriesShift => transport_eta(idx),
        TransportMap::Omega => transport_eta(idx).exp(),
    })
}
