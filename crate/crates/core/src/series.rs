//! Lazy Hahn series over an abstract ordered monomial group.
//!
//! A [`Series`] is a stream of coefficient–monomial [`Term`]s with strictly
//! decreasing monomials. Streams are forced on demand, the forced prefix is
//! cached, and forcing is idempotent: any two readers observe the same
//! prefix. All values are immutable after construction and safe to share
//! across threads.
//!
//! Supports are restricted to order type at most omega (a stream), which is
//! exactly what the constructive maps in the rest of the crate produce.
//! Searches that may fail to make progress (cancellation runs in merges,
//! candidate hunts in products) are guarded by the budgets in
//! [`crate::limits`].

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::limits::{MERGE_FUSE, PRODUCT_FUSE, SCAN_FUSE};
use crate::rational::Coeff;

/// An element of a multiplicatively written ordered abelian group.
///
/// Comparison is a strict total order compatible with multiplication, but it
/// may be only semi-decidable for keys that contain lazy data; such keys
/// report [`Error::Undecided`] when their decision budget runs out.
pub trait MonomialKey: Clone + Send + Sync + 'static {
    /// The group identity.
    fn one() -> Self;

    fn group_mul(&self, other: &Self) -> Self;

    fn group_inv(&self) -> Self;

    fn try_cmp(&self, other: &Self) -> Result<Ordering>;

    fn is_one(&self) -> Result<bool> {
        Ok(self.try_cmp(&Self::one())? == Ordering::Equal)
    }

    /// `self^n` for integer `n`.
    fn group_pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.group_inv() } else { self.clone() };
        let mut out = Self::one();
        for _ in 0..n.unsigned_abs() {
            out = out.group_mul(&base);
        }
        out
    }
}

/// One coefficient–monomial pair. The coefficient is never zero.
#[derive(Clone)]
pub struct Term<M> {
    pub coeff: Coeff,
    pub mono: M,
}

impl<M> Term<M> {
    pub fn new(coeff: Coeff, mono: M) -> Self {
        debug_assert!(!coeff.is_zero(), "zero coefficient stored in a term");
        Term { coeff, mono }
    }
}

impl<M: fmt::Debug> fmt::Debug for Term<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}*{:?}", self.coeff, self.mono)
    }
}

/// Declared bound on where the support of a series sits relative to 1.
///
/// The marker is metadata established at construction: it must be sound
/// (every monomial the stream will ever produce satisfies it) but it does
/// not have to be tight. `Mixed` is always sound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupportClass {
    /// Every monomial is > 1.
    PurelyInfinite,
    /// Every monomial is < 1.
    Infinitesimal,
    /// Every monomial is <= 1.
    AtMostOne,
    /// No declared bound.
    Mixed,
}

impl SupportClass {
    pub fn add(self, other: SupportClass) -> SupportClass {
        use SupportClass::*;
        match (self, other) {
            (a, b) if a == b => a,
            (Infinitesimal, AtMostOne) | (AtMostOne, Infinitesimal) => AtMostOne,
            _ => Mixed,
        }
    }

    pub fn mul(self, other: SupportClass) -> SupportClass {
        use SupportClass::*;
        match (self, other) {
            (PurelyInfinite, PurelyInfinite) => PurelyInfinite,
            (Infinitesimal, Infinitesimal)
            | (Infinitesimal, AtMostOne)
            | (AtMostOne, Infinitesimal) => Infinitesimal,
            (AtMostOne, AtMostOne) => AtMostOne,
            _ => Mixed,
        }
    }
}

/// Produces the terms of a series in strictly decreasing monomial order.
pub(crate) trait Generator<M: MonomialKey>: Send {
    fn next_term(&mut self) -> Result<Option<Term<M>>>;
}

struct State<M: MonomialKey> {
    forced: Vec<Term<M>>,
    gen: Option<Box<dyn Generator<M>>>,
}

/// A lazy series: strictly decreasing stream of terms with memoized forcing.
pub struct Series<M: MonomialKey> {
    class: SupportClass,
    state: Arc<Mutex<State<M>>>,
}

impl<M: MonomialKey> Clone for Series<M> {
    fn clone(&self) -> Self {
        Series {
            class: self.class,
            state: Arc::clone(&self.state),
        }
    }
}

impl<M: MonomialKey + fmt::Debug> fmt::Debug for Series<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let st = self.state.lock().expect("series lock");
        write!(f, "Series[")?;
        for (i, t) in st.forced.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t:?}")?;
        }
        if st.gen.is_some() {
            write!(f, ", ..")?;
        }
        write!(f, "]")
    }
}

impl<M: MonomialKey> Series<M> {
    pub fn empty() -> Self {
        Series {
            class: SupportClass::PurelyInfinite,
            state: Arc::new(Mutex::new(State {
                forced: Vec::new(),
                gen: None,
            })),
        }
    }

    /// The series `1`.
    pub fn one() -> Self {
        Series::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        if c.is_zero() {
            return Series::empty().classified(SupportClass::AtMostOne);
        }
        Series::from_terms(vec![Term::new(c, M::one())]).classified(SupportClass::AtMostOne)
    }

    /// Builds a series from terms already in strictly decreasing order.
    /// Panics on an order violation; callers sort user data first.
    pub fn from_terms(terms: Vec<Term<M>>) -> Self {
        for w in terms.windows(2) {
            let ord = w[0].mono.try_cmp(&w[1].mono);
            assert!(
                matches!(ord, Ok(Ordering::Greater) | Err(_)),
                "from_terms: monomials not strictly decreasing"
            );
        }
        Series {
            class: SupportClass::Mixed,
            state: Arc::new(Mutex::new(State {
                forced: terms,
                gen: None,
            })),
        }
    }

    pub(crate) fn from_generator(class: SupportClass, gen: Box<dyn Generator<M>>) -> Self {
        Series {
            class,
            state: Arc::new(Mutex::new(State {
                forced: Vec::new(),
                gen: Some(gen),
            })),
        }
    }

    /// Same stream, different declared support class. The caller is
    /// responsible for soundness of the new class.
    pub fn classified(&self, class: SupportClass) -> Self {
        Series {
            class,
            state: Arc::clone(&self.state),
        }
    }

    pub fn class(&self) -> SupportClass {
        self.class
    }

    /// A series defined by a computation run on first demand.
    pub fn defer<F>(class: SupportClass, thunk: F) -> Self
    where
        F: FnOnce() -> Result<Series<M>> + Send + 'static,
    {
        Series::from_generator(
            class,
            Box::new(DeferGen {
                thunk: Some(Box::new(thunk)),
                cursor: None,
            }),
        )
    }

    /// Forces and returns the term at position `i`, if the stream reaches it.
    ///
    /// Forcing is idempotent: the prefix is cached under a lock, so every
    /// caller sees the same terms. Errors come from the underlying
    /// generators (budget exhaustion, undecided comparisons).
    pub fn term(&self, i: usize) -> Result<Option<Term<M>>> {
        let mut st = self.state.lock().expect("series lock");
        while st.forced.len() <= i {
            let Some(gen) = st.gen.as_mut() else {
                return Ok(None);
            };
            match gen.next_term() {
                Ok(Some(t)) => {
                    if let Some(prev) = st.forced.last() {
                        if matches!(
                            t.mono.try_cmp(&prev.mono),
                            Ok(Ordering::Greater | Ordering::Equal)
                        ) {
                            return Err(Error::OrderViolation);
                        }
                    }
                    st.forced.push(t);
                }
                Ok(None) => st.gen = None,
                Err(e) => return Err(e),
            }
        }
        Ok(Some(st.forced[i].clone()))
    }

    /// The leading (largest) term.
    pub fn leading(&self) -> Result<Term<M>> {
        self.term(0)?.ok_or(Error::EmptySeries)
    }

    /// Whether the stream proves empty at its head.
    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.term(0)?.is_none())
    }

    /// Forces up to `depth` terms. Returns the terms together with a flag
    /// that is `true` when the stream is not known to be exhausted.
    pub fn truncate(&self, depth: usize) -> Result<(Vec<Term<M>>, bool)> {
        let mut out = Vec::new();
        for i in 0..depth {
            match self.term(i)? {
                Some(t) => out.push(t),
                None => return Ok((out, false)),
            }
        }
        // Probe one past the requested depth so that a stream that ends
        // exactly there reports itself complete. A budget failure on the
        // probe is not the caller's problem.
        match self.term(depth) {
            Ok(None) => Ok((out, false)),
            _ => Ok((out, true)),
        }
    }

    /// The stream starting at position `from` of this series.
    pub fn suffix(&self, from: usize) -> Series<M> {
        Series::from_generator(
            self.class,
            Box::new(SuffixGen {
                src: self.clone(),
                pos: from,
            }),
        )
    }

    pub fn neg(&self) -> Series<M> {
        self.scale(&Coeff::from_int(-1))
    }

    /// Termwise scalar multiple; the zero scalar gives the empty series.
    pub fn scale(&self, c: &Coeff) -> Series<M> {
        if c.is_zero() {
            return Series::empty().classified(SupportClass::AtMostOne);
        }
        Series::from_generator(
            self.class,
            Box::new(ScaleGen {
                src: self.clone(),
                pos: 0,
                factor: c.clone(),
            }),
        )
    }

    /// Termwise multiplication by a single term.
    pub fn mul_term(&self, t: &Term<M>) -> Series<M> {
        Series::from_generator(
            SupportClass::Mixed,
            Box::new(MulTermGen {
                src: self.clone(),
                pos: 0,
                coeff: t.coeff.clone(),
                mono: t.mono.clone(),
            }),
        )
    }

    pub fn add(&self, other: &Series<M>) -> Series<M> {
        sum_family(vec![self.clone(), other.clone()])
    }

    pub fn sub(&self, other: &Series<M>) -> Series<M> {
        self.add(&other.neg())
    }

    /// Exact Cauchy product.
    ///
    /// Productive on grid-generable operands; otherwise the candidate hunt
    /// for some term exceeds its budget and forcing reports
    /// [`Error::Diverges`].
    pub fn mul(&self, other: &Series<M>) -> Series<M> {
        Series::from_generator(
            self.class.mul(other.class),
            Box::new(MulGen {
                f: self.clone(),
                g: other.clone(),
                frontier: None,
            }),
        )
    }

    /// Multiplicative inverse via geometric expansion of the tail.
    pub fn inverse(&self) -> Result<Series<M>> {
        let lead = self.term(0)?.ok_or(Error::ZeroDivision)?;
        // self = lt * (1 + d) with d < 1, so 1/self = lt^{-1} * sum (-d)^n.
        let lead_inv = Term::new(lead.coeff.recip(), lead.mono.group_inv());
        let tail = self.suffix(1).mul_term(&lead_inv);
        let tail = tail.classified(SupportClass::Infinitesimal);
        let geometric = sum_powers(&tail, 0, |n| {
            if n % 2 == 0 {
                Coeff::one()
            } else {
                Coeff::from_int(-1)
            }
        })?;
        Ok(geometric.mul_term(&lead_inv))
    }

    /// Termwise image under a strictly increasing monomial map.
    ///
    /// Coefficients are preserved. If the image prefix ever fails strict
    /// decrease, forcing reports [`Error::OrderViolation`].
    pub fn map_monomials<F>(&self, f: F) -> Series<M>
    where
        F: Fn(&M) -> Result<M> + Send + 'static,
    {
        Series::from_generator(
            SupportClass::Mixed,
            Box::new(MapMonoGen {
                src: self.clone(),
                pos: 0,
                map: Box::new(f),
            }),
        )
    }

    /// Splits into the part with monomials > 1, the coefficient at 1, and
    /// the part with monomials < 1. The three parts re-sum to the series.
    ///
    /// On a stream with no declared support class this scans for the
    /// boundary, which forces the whole infinite part.
    pub fn decompose(&self) -> Result<(Series<M>, Coeff, Series<M>)> {
        let zero = || Series::empty().classified(SupportClass::Infinitesimal);
        match self.class {
            SupportClass::PurelyInfinite => Ok((self.clone(), Coeff::zero(), zero())),
            SupportClass::Infinitesimal => {
                Ok((Series::empty(), Coeff::zero(), self.clone()))
            }
            _ => {
                let mut i = 0usize;
                loop {
                    if i > SCAN_FUSE {
                        return Err(Error::Diverges { budget: SCAN_FUSE });
                    }
                    let Some(t) = self.term(i)? else {
                        break;
                    };
                    match t.mono.try_cmp(&M::one())? {
                        Ordering::Greater => i += 1,
                        Ordering::Equal => {
                            let up = self.forced_prefix(i);
                            let eps = self
                                .suffix(i + 1)
                                .classified(SupportClass::Infinitesimal);
                            return Ok((up, t.coeff, eps));
                        }
                        Ordering::Less => break,
                    }
                }
                let up = self.forced_prefix(i);
                let eps = self.suffix(i).classified(SupportClass::Infinitesimal);
                Ok((up, Coeff::zero(), eps))
            }
        }
    }

    /// The already-forced terms `0..len` as an explicit series.
    fn forced_prefix(&self, len: usize) -> Series<M> {
        let st = self.state.lock().expect("series lock");
        Series::from_terms(st.forced[..len].to_vec())
            .classified(SupportClass::PurelyInfinite)
    }
}

/// Sign of `f - g`, decided from the first differing position, inspecting at
/// most `depth` positions of each stream.
pub fn compare<M: MonomialKey>(f: &Series<M>, g: &Series<M>, depth: usize) -> Result<Ordering> {
    let mut i = 0usize;
    loop {
        if i >= depth {
            return Err(Error::Undecided { depth });
        }
        match (f.term(i)?, g.term(i)?) {
            (None, None) => return Ok(Ordering::Equal),
            (Some(t), None) => return Ok(t.coeff.sign()),
            (None, Some(t)) => return Ok(t.coeff.sign().reverse()),
            (Some(a), Some(b)) => match a.mono.try_cmp(&b.mono)? {
                Ordering::Greater => return Ok(a.coeff.sign()),
                Ordering::Less => return Ok(b.coeff.sign().reverse()),
                Ordering::Equal => {
                    if a.coeff != b.coeff {
                        return Ok(a.coeff.cmp(&b.coeff));
                    }
                    i += 1;
                }
            },
        }
    }
}

/// Sign of a series against zero. Decided by its leading term, so this only
/// fails if producing the leading term fails.
pub fn sign<M: MonomialKey>(f: &Series<M>) -> Result<Ordering> {
    Ok(match f.term(0)? {
        Some(t) => t.coeff.sign(),
        None => Ordering::Equal,
    })
}

/// Dominance relation between nonzero series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dominance {
    /// Strictly dominated (smaller archimedean class).
    Below,
    /// Same archimedean class.
    Same,
    /// Strictly dominating.
    Above,
}

impl fmt::Display for Dominance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dominance::Below => "<<",
            Dominance::Same => "~",
            Dominance::Above => ">>",
        })
    }
}

/// Compares the leading monomials of two nonzero series.
pub fn dominance<M: MonomialKey>(f: &Series<M>, g: &Series<M>) -> Result<Dominance> {
    let a = f.leading()?;
    let b = g.leading()?;
    Ok(match a.mono.try_cmp(&b.mono)? {
        Ordering::Less => Dominance::Below,
        Ordering::Equal => Dominance::Same,
        Ordering::Greater => Dominance::Above,
    })
}

/// n-ary merge of finitely many series; identical semantics to folded
/// addition, with equal monomials combined and zero sums dropped.
pub fn sum_family<M: MonomialKey>(parts: Vec<Series<M>>) -> Series<M> {
    if parts.is_empty() {
        return Series::empty().classified(SupportClass::AtMostOne);
    }
    let class = parts
        .iter()
        .map(|p| p.class)
        .reduce(SupportClass::add)
        .unwrap();
    Series::from_generator(
        class,
        Box::new(MergeGen {
            cursors: parts.into_iter().map(|s| (s, 0usize)).collect(),
        }),
    )
}

/// Concatenation of streams known to be in order: every monomial of `first`
/// exceeds every monomial of `second`. The order check on forcing still
/// validates the seam.
pub fn concat<M: MonomialKey>(first: &Series<M>, second: &Series<M>) -> Series<M> {
    Series::from_generator(
        first.class.add(second.class),
        Box::new(ConcatGen {
            first: first.clone(),
            second: second.clone(),
            pos: 0,
            in_second: false,
        }),
    )
}

/// `sum over n >= first of coeff(n) * eps^n` for infinitesimal `eps`.
///
/// This is the shared engine behind geometric inversion, the exponential
/// unit factor and the logarithm tail. Powers of `eps` are activated as the
/// emitted monomial descends past their leading bound, which keeps the
/// stream productive.
pub fn sum_powers<M, F>(eps: &Series<M>, first: u32, coeff: F) -> Result<Series<M>>
where
    M: MonomialKey,
    F: Fn(u32) -> Coeff + Send + 'static,
{
    let Some(lead) = eps.term(0)? else {
        // eps = 0: only the n = 0 term can survive.
        if first == 0 {
            return Ok(Series::constant(coeff(0)));
        }
        return Ok(Series::empty().classified(SupportClass::Infinitesimal));
    };
    let class = if first == 0 {
        SupportClass::AtMostOne
    } else {
        SupportClass::Infinitesimal
    };
    let mut pending = Series::one().classified(SupportClass::AtMostOne);
    for _ in 0..first {
        pending = pending.mul(eps);
    }
    Ok(Series::from_generator(
        class,
        Box::new(PowerSumGen {
            eps: eps.clone(),
            eps_lead: lead.mono,
            active: Vec::new(),
            next_n: first,
            pending,
            coeff: Box::new(coeff),
        }),
    ))
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

struct SuffixGen<M: MonomialKey> {
    src: Series<M>,
    pos: usize,
}

impl<M: MonomialKey> Generator<M> for SuffixGen<M> {
    fn next_term(&mut self) -> Result<Option<Term<M>>> {
        let t = self.src.term(self.pos)?;
        if t.is_some() {
            self.pos += 1;
        }
        Ok(t)
    }
}

struct ScaleGen<M: MonomialKey> {
    src: Series<M>,
    pos: usize,
    factor: Coeff,
}

impl<M: MonomialKey> Generator<M> for ScaleGen<M> {
    fn next_term(&mut self) -> Result<Option<Term<M>>> {
        match self.src.term(self.pos)? {
            Some(t) => {
                self.pos += 1;
                Ok(Some(Term::new(&t.coeff * &self.factor, t.mono)))
            }
            None => Ok(None),
        }
    }
}

struct MulTermGen<M: MonomialKey> {
    src: Series<M>,
    pos: usize,
    coeff: Coeff,
    mono: M,
}

impl<M: MonomialKey> Generator<M> for MulTermGen<M> {
    fn next_term(&mut self) -> Result<Option<Term<M>>> {
        match self.src.term(self.pos)? {
            Some(t) => {
                self.pos += 1;
                Ok(Some(Term::new(
                    &t.coeff * &self.coeff,
                    t.mono.group_mul(&self.mono),
                )))
            }
            None => Ok(None),
        }
    }
}

struct MapMonoGen<M: MonomialKey> {
    src: Series<M>,
    pos: usize,
    map: Box<dyn Fn(&M) -> Result<M> + Send>,
}

impl<M: MonomialKey> Generator<M> for MapMonoGen<M> {
    fn next_term(&mut self) -> Result<Option<Term<M>>> {
        match self.src.term(self.pos)? {
            Some(t) => {
                self.pos += 1;
                Ok(Some(Term::new(t.coeff, (self.map)(&t.mono)?)))
            }
            None => Ok(None),
        }
    }
}

struct ConcatGen<M: MonomialKey> {
    first: Series<M>,
    second: Series<M>,
    pos: usize,
    in_second: bool,
}

impl<M: MonomialKey> Generator<M> for ConcatGen<M> {
    fn next_term(&mut self) -> Result<Option<Term<M>>> {
        if !self.in_second {
            match self.first.term(self.pos)? {
                Some(t) => {
                    self.pos += 1;
                    return Ok(Some(t));
                }
                None => {
                    self.in_second = true;
                    self.pos = 0;
                }
            }
        }
        match self.second.term(self.pos)? {
            Some(t) => {
                self.pos += 1;
                Ok(Some(t))
            }
            None => Ok(None),
        }
    }
}

struct DeferGen<M: MonomialKey> {
    thunk: Option<Box<dyn FnOnce() -> Result<Series<M>> + Send>>,
    cursor: Option<(Series<M>, usize)>,
}

impl<M: MonomialKey> Generator<M> for DeferGen<M> {
    fn next_term(&mut self) -> Result<Option<Term<M>>> {
        if self.cursor.is_none() {
            let thunk = self.thunk.take().expect("deferred series forced twice");
            self.cursor = Some((thunk()?, 0));
        }
        let (src, pos) = self.cursor.as_mut().unwrap();
        match src.term(*pos)? {
            Some(t) => {
                *pos += 1;
                Ok(Some(t))
            }
            None => Ok(None),
        }
    }
}

struct MergeGen<M: MonomialKey> {
    cursors: Vec<(Series<M>, usize)>,
}

impl<M: MonomialKey> Generator<M> for MergeGen<M> {
    fn next_term(&mut self) -> Result<Option<Term<M>>> {
        let mut cancelled = 0usize;
        loop {
            // Indices of cursors whose current monomial is the maximum.
            let mut best: Vec<usize> = Vec::new();
            let mut best_mono: Option<M> = None;
            for idx in 0..self.cursors.len() {
                let (s, pos) = &self.cursors[idx];
                let Some(t) = s.term(*pos)? else { continue };
                match &best_mono {
                    None => {
                        best_mono = Some(t.mono);
                        best = vec![idx];
                    }
                    Some(m) => match t.mono.try_cmp(m)? {
                        Ordering::Greater => {
                            best_mono = Some(t.mono);
                            best = vec![idx];
                        }
                        Ordering::Equal => best.push(idx),
                        Ordering::Less => {}
                    },
                }
            }
            let Some(mono) = best_mono else {
                return Ok(None);
            };
            let mut total = Coeff::zero();
            for &idx in &best {
                let (s, pos) = &mut self.cursors[idx];
                let t = s.term(*pos)?.expect("merge cursor moved");
                total += &t.coeff;
                *pos += 1;
            }
            if !total.is_zero() {
                return Ok(Some(Term::new(total, mono)));
            }
            cancelled += 1;
            if cancelled > MERGE_FUSE {
                return Err(Error::Diverges { budget: MERGE_FUSE });
            }
        }
    }
}

/// Candidate pair in a Cauchy product frontier.
struct Candidate<M> {
    i: usize,
    j: usize,
    mono: M,
}

struct MulGen<M: MonomialKey> {
    f: Series<M>,
    g: Series<M>,
    /// `None` until the first pull seeds the frontier.
    frontier: Option<Vec<Candidate<M>>>,
}

impl<M: MonomialKey> MulGen<M> {
    fn push(&mut self, i: usize, j: usize) -> Result<()> {
        let (Some(a), Some(b)) = (self.f.term(i)?, self.g.term(j)?) else {
            return Ok(());
        };
        self.frontier.as_mut().unwrap().push(Candidate {
            i,
            j,
            mono: a.mono.group_mul(&b.mono),
        });
        Ok(())
    }
}

impl<M: MonomialKey> Generator<M> for MulGen<M> {
    fn next_term(&mut self) -> Result<Option<Term<M>>> {
        if self.frontier.is_none() {
            self.frontier = Some(Vec::new());
            self.push(0, 0)?;
        }
        let mut examined = 0usize;
        loop {
            // Locate the maximal monomial on the frontier. Every pair not
            // yet examined is dominated by some frontier entry, so this is
            // the true next monomial of the product.
            let frontier = self.frontier.as_ref().unwrap();
            if frontier.is_empty() {
                return Ok(None);
            }
            let mut max_positions = vec![0usize];
            for idx in 1..frontier.len() {
                match frontier[idx].mono.try_cmp(&frontier[max_positions[0]].mono)? {
                    Ordering::Greater => max_positions = vec![idx],
                    Ordering::Equal => max_positions.push(idx),
                    Ordering::Less => {}
                }
            }
            let mono = frontier[max_positions[0]].mono.clone();
            let mut total = Coeff::zero();
            let mut popped: Vec<(usize, usize)> = Vec::new();
            // Remove in descending index order to keep positions valid.
            max_positions.sort_unstable_by(|a, b| b.cmp(a));
            let frontier = self.frontier.as_mut().unwrap();
            for idx in max_positions {
                let c = frontier.swap_remove(idx);
                popped.push((c.i, c.j));
            }
            for &(i, j) in &popped {
                let a = self.f.term(i)?.expect("product cursor");
                let b = self.g.term(j)?.expect("product cursor");
                total += &(&a.coeff * &b.coeff);
            }
            examined += popped.len();
            for (i, j) in popped {
                self.push(i, j + 1)?;
                if j == 0 {
                    self.push(i + 1, 0)?;
                }
            }
            if !total.is_zero() {
                return Ok(Some(Term::new(total, mono)));
            }
            if examined > PRODUCT_FUSE {
                return Err(Error::Diverges {
                    budget: PRODUCT_FUSE,
                });
            }
        }
    }
}

struct PowerCursor<M: MonomialKey> {
    series: Series<M>,
    pos: usize,
    factor: Coeff,
}

struct PowerSumGen<M: MonomialKey> {
    eps: Series<M>,
    eps_lead: M,
    active: Vec<PowerCursor<M>>,
    next_n: u32,
    /// `eps^next_n`, maintained across activations.
    pending: Series<M>,
    coeff: Box<dyn Fn(u32) -> Coeff + Send>,
}

impl<M: MonomialKey> PowerSumGen<M> {
    /// Largest monomial among the active cursors.
    fn best(&self) -> Result<Option<M>> {
        let mut best: Option<M> = None;
        for c in &self.active {
            let Some(t) = c.series.term(c.pos)? else {
                continue;
            };
            best = match best {
                None => Some(t.mono),
                Some(m) => {
                    if t.mono.try_cmp(&m)? == Ordering::Greater {
                        Some(t.mono)
                    } else {
                        Some(m)
                    }
                }
            };
        }
        Ok(best)
    }

    fn activate_next(&mut self) {
        let factor = (self.coeff)(self.next_n);
        if !factor.is_zero() {
            self.active.push(PowerCursor {
                series: self.pending.clone(),
                pos: 0,
                factor,
            });
        }
        self.pending = self.pending.mul(&self.eps);
        self.next_n += 1;
    }
}

impl<M: MonomialKey> Generator<M> for PowerSumGen<M> {
    fn next_term(&mut self) -> Result<Option<Term<M>>> {
        let mut examined = 0usize;
        loop {
            // Activate powers until the bound lm(eps)^next_n drops below the
            // best candidate; past that point higher powers cannot
            // contribute the next term.
            loop {
                let best = self.best()?;
                let bound = self.eps_lead.group_pow(self.next_n as i64);
                let need = match &best {
                    None => true,
                    Some(b) => bound.try_cmp(b)? != Ordering::Less,
                };
                if need {
                    self.activate_next();
                } else {
                    break;
                }
            }
            let Some(mono) = self.best()? else {
                return Ok(None);
            };
            let mut total = Coeff::zero();
            for c in &mut self.active {
                if let Some(t) = c.series.term(c.pos)? {
                    if t.mono.try_cmp(&mono)? == Ordering::Equal {
                        total += &(&t.coeff * &c.factor);
                        c.pos += 1;
                        examined += 1;
                    }
                }
            }
            self.active.retain(|c| {
                // Drop cursors that have proven exhausted without forcing.
                match c.series.term(c.pos) {
                    Ok(None) => false,
                    _ => true,
                }
            });
            if !total.is_zero() {
                return Ok(Some(Term::new(total, mono)));
            }
            if examined > PRODUCT_FUSE {
                return Err(Error::Diverges {
                    budget: PRODUCT_FUSE,
                });
            }
        }
    }
}

// ---------------------------------------------------------------------------
// A concrete monomial group: rational powers of one variable
// ---------------------------------------------------------------------------

/// The monomial `x^s` with rational exponent; the group of monomials of a
/// Puiseux-style series field in one variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PowerMonomial(pub Coeff);

impl PowerMonomial {
    pub fn var() -> Self {
        PowerMonomial(Coeff::one())
    }

    pub fn pow(s: i64) -> Self {
        PowerMonomial(Coeff::from_int(s))
    }
}

impl MonomialKey for PowerMonomial {
    fn one() -> Self {
        PowerMonomial(Coeff::zero())
    }

    fn group_mul(&self, other: &Self) -> Self {
        PowerMonomial(&self.0 + &other.0)
    }

    fn group_inv(&self) -> Self {
        PowerMonomial(-&self.0)
    }

    fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        Ok(self.0.cmp(&other.0))
    }
}

impl fmt::Display for PowerMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            write!(f, "1")
        } else if self.0.is_one() {
            write!(f, "x")
        } else {
            write!(f, "x^{}", self.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type S = Series<PowerMonomial>;

    fn ps(terms: &[(i64, i64)]) -> S {
        // (coeff, exponent) pairs, given descending by exponent.
        Series::from_terms(
            terms
                .iter()
                .map(|&(c, e)| Term::new(Coeff::from_int(c), PowerMonomial::pow(e)))
                .collect(),
        )
    }

    fn collect(f: &S, d: usize) -> Vec<(Coeff, Coeff)> {
        let (terms, _) = f.truncate(d).unwrap();
        terms.into_iter().map(|t| (t.coeff, t.mono.0)).collect()
    }

    fn assert_eq_series(f: &S, g: &S, d: usize) {
        assert_eq!(collect(f, d), collect(g, d));
    }

    #[test]
    fn add_cancels_and_merges() {
        // (x + 1) + (x - 1) = 2x
        let f = ps(&[(1, 1), (1, 0)]);
        let g = ps(&[(1, 1), (-1, 0)]);
        assert_eq_series(&f.add(&g), &ps(&[(2, 1)]), 8);
        // f + 0 = f
        assert_eq_series(&f.add(&S::empty()), &f, 8);
        // (x^2 + x) + (x^2 - x) = 2x^2
        let a = ps(&[(1, 2), (1, 1)]);
        let b = ps(&[(1, 2), (-1, 1)]);
        assert_eq_series(&a.add(&b), &ps(&[(2, 2)]), 8);
    }

    #[test]
    fn scale_cases() {
        let f = ps(&[(1, 2), (1, 0)]);
        assert!(f.scale(&Coeff::zero()).is_empty().unwrap());
        assert_eq_series(&f.scale(&Coeff::one()), &f, 8);
        let g = ps(&[(1, 1)]).add(&S::constant(Coeff::ratio(-1, 2)));
        assert_eq_series(
            &g.scale(&Coeff::from_int(-2)),
            &ps(&[(-2, 1), (1, 0)]),
            8,
        );
    }

    #[test]
    fn mul_basics() {
        // (x+1)(x-1) = x^2 - 1
        let f = ps(&[(1, 1), (1, 0)]);
        let g = ps(&[(1, 1), (-1, 0)]);
        assert_eq_series(&f.mul(&g), &ps(&[(1, 2), (-1, 0)]), 8);
        // f * 1 = f
        assert_eq_series(&f.mul(&S::one()), &f, 8);
        // (2x)(3x) = 6x^2
        assert_eq_series(&ps(&[(2, 1)]).mul(&ps(&[(3, 1)])), &ps(&[(6, 2)]), 8);
    }

    #[test]
    fn mul_leading_term_is_product_of_leading_terms() {
        let f = ps(&[(3, 2), (1, 1), (5, -1)]);
        let g = ps(&[(-2, 4), (7, 0)]);
        let lt = f.mul(&g).leading().unwrap();
        assert_eq!(lt.coeff, Coeff::from_int(-6));
        assert_eq!(lt.mono, PowerMonomial::pow(6));
    }

    #[test]
    fn inverse_single_term_and_constant() {
        let inv_x = ps(&[(1, 1)]).inverse().unwrap();
        assert_eq_series(&inv_x, &ps(&[(1, -1)]), 4);
        let half = S::constant(Coeff::from_int(2)).inverse().unwrap();
        assert_eq!(collect(&half, 4), vec![(Coeff::ratio(1, 2), Coeff::zero())]);
        assert_eq!(S::empty().inverse().unwrap_err(), Error::ZeroDivision);
    }

    #[test]
    fn inverse_geometric() {
        // 1 / (1 - x^-1) = 1 + x^-1 + x^-2 + ...
        let f = ps(&[(1, 0), (-1, -1)]);
        let inv = f.inverse().unwrap();
        let expect = ps(&[(1, 0), (1, -1), (1, -2), (1, -3), (1, -4), (1, -5)]);
        assert_eq_series(&inv.classified(SupportClass::Mixed), &expect, 6);
        // Product of truncations is 1 up to the discarded tail.
        let (terms, _) = inv.truncate(6).unwrap();
        let prod = f.mul(&Series::from_terms(terms));
        let (pt, _) = prod.truncate(6).unwrap();
        assert_eq!(pt.len(), 2);
        assert_eq!(pt[0].coeff, Coeff::one());
        assert!(pt[0].mono.0.is_zero());
        // The remainder term sits below the kept depth.
        assert_eq!(pt[1].mono, PowerMonomial::pow(-6));
    }

    #[test]
    fn leading_and_empty() {
        let f = ps(&[(3, 2), (1, 1)]);
        let lt = f.leading().unwrap();
        assert_eq!((lt.coeff, lt.mono.0), (Coeff::from_int(3), Coeff::from_int(2)));
        assert_eq!(S::empty().leading().unwrap_err(), Error::EmptySeries);
        let c = S::constant(Coeff::from_int(7));
        let lt = c.leading().unwrap();
        assert!(lt.mono.is_one().unwrap());
    }

    #[test]
    fn compare_cases() {
        let x = ps(&[(1, 1)]);
        let lower = ps(&[(1, 0)]);
        assert_eq!(compare(&x, &lower, 4).unwrap(), Ordering::Greater);
        assert_eq!(
            compare(&ps(&[(1, 1), (1, 0)]), &ps(&[(1, 1), (2, 0)]), 4).unwrap(),
            Ordering::Less
        );
        // Equality of two lazy but equal streams is only semi-decided.
        let a = ps(&[(1, 0), (-1, -1)]).inverse().unwrap();
        let b = ps(&[(1, 0), (-1, -1)]).inverse().unwrap();
        assert_eq!(
            compare(&a, &b, 4).unwrap_err(),
            Error::Undecided { depth: 4 }
        );
        // Exhausted streams decide equality.
        assert_eq!(compare(&x, &x, 4).unwrap(), Ordering::Equal);
    }

    #[test]
    fn dominance_cases() {
        let x = ps(&[(1, 1)]);
        let x2 = ps(&[(1, 2)]);
        assert_eq!(
            dominance(&ps(&[(5, 2)]), &x2).unwrap(),
            Dominance::Same
        );
        assert_eq!(dominance(&x, &x2).unwrap(), Dominance::Below);
        assert_eq!(dominance(&ps(&[(1, 1), (1, 0)]), &x).unwrap(), Dominance::Same);
        assert_eq!(dominance(&S::empty(), &x).unwrap_err(), Error::EmptySeries);
    }

    #[test]
    fn decompose_cases() {
        let f = ps(&[(1, 1), (3, 0), (1, -1)]);
        let (up, r, eps) = f.decompose().unwrap();
        assert_eq_series(&up, &ps(&[(1, 1)]), 4);
        assert_eq!(r, Coeff::from_int(3));
        assert_eq_series(&eps.classified(SupportClass::Mixed), &ps(&[(1, -1)]), 4);

        let (up, r, eps) = S::constant(Coeff::from_int(5)).decompose().unwrap();
        assert!(up.is_empty().unwrap());
        assert_eq!(r, Coeff::from_int(5));
        assert!(eps.is_empty().unwrap());

        let (up, r, eps) = ps(&[(1, -2)]).decompose().unwrap();
        assert!(up.is_empty().unwrap());
        assert!(r.is_zero());
        assert_eq_series(&eps.classified(SupportClass::Mixed), &ps(&[(1, -2)]), 4);
    }

    #[test]
    fn sum_family_cases() {
        let out = sum_family(vec![ps(&[(1, 1)]), S::one(), ps(&[(1, -1)])]);
        assert_eq_series(&out, &ps(&[(1, 1), (1, 0), (1, -1)]), 4);
        assert!(sum_family::<PowerMonomial>(vec![]).is_empty().unwrap());
        assert!(sum_family(vec![ps(&[(1, 1)]), ps(&[(-1, 1)])])
            .is_empty()
            .unwrap());
    }

    #[test]
    fn map_monomials_cases() {
        let f = ps(&[(2, 3), (1, -1)]);
        let id = f.map_monomials(|m| Ok(m.clone()));
        assert_eq_series(&id, &f, 4);
        let shifted = f.map_monomials(|m| Ok(PowerMonomial(&m.0 + &Coeff::one())));
        assert_eq_series(&shifted, &ps(&[(2, 4), (1, 0)]), 4);
        assert!(S::empty()
            .map_monomials(|m| Ok(m.clone()))
            .is_empty()
            .unwrap());
        // A non-increasing map is caught when the prefix is forced.
        let collapse = f.map_monomials(|_| Ok(PowerMonomial::one()));
        assert_eq!(collapse.term(1).unwrap_err(), Error::OrderViolation);
    }

    #[test]
    fn mul_diverges_on_total_cancellation() {
        // (1 - x^-1) * (1 + x^-1 + x^-2 + ...) leaves only 1; hunting for a
        // second term must trip the budget rather than spin.
        let f = ps(&[(1, 0), (-1, -1)]);
        let geo = f.inverse().unwrap();
        let prod = f.mul(&geo);
        let lt = prod.term(0).unwrap().unwrap();
        assert!(lt.mono.is_one().unwrap());
        assert!(matches!(
            prod.term(1).unwrap_err(),
            Error::Diverges { .. }
        ));
    }

    #[test]
    fn forcing_is_idempotent_across_threads() {
        let f = ps(&[(1, 0), (-1, -1)]).inverse().unwrap();
        let mut handles = Vec::new();
        for _ in 0..4 {
            let s = f.clone();
            handles.push(std::thread::spawn(move || {
                let (terms, _) = s.truncate(12).unwrap();
                terms
                    .into_iter()
                    .map(|t| (t.coeff, t.mono.0))
                    .collect::<Vec<_>>()
            }));
        }
        let results: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for r in &results[1..] {
            assert_eq!(r, &results[0]);
        }
    }

    #[test]
    fn truncate_reports_exhaustion() {
        let f = ps(&[(1, 1), (1, 0)]);
        let (terms, truncated) = f.truncate(8).unwrap();
        assert_eq!(terms.len(), 2);
        assert!(!truncated);
        let g = ps(&[(1, 0), (-1, -1)]).inverse().unwrap();
        let (terms, truncated) = g.truncate(3).unwrap();
        assert_eq!(terms.len(), 3);
        assert!(truncated);
    }
}
