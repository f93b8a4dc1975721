//! Alphabets, events, probability vectors, and event-algebra utilities.
//!
//! States are the integers `0..s` for an alphabet of size `s`; the sigma
//! algebra is the power set, so an [`Event`] is just a canonical (sorted,
//! deduplicated) set of states. [`Dist`] is an exact probability vector — a
//! point of the simplex over the alphabet.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Largest supported alphabet size. Atom enumeration is exponential in the
/// number of events, so the kit targets desk scale.
pub const MAX_ALPHABET: usize = 16;

/// Largest supported event-tuple length (2^k atoms are enumerated).
pub const MAX_TUPLE: usize = 12;

/// A finite state space `{0, ..., size-1}` with its power-set sigma algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    size: usize,
}

impl Alphabet {
    /// A new alphabet of `size` states.
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > MAX_ALPHABET {
            return Err(Error::InvalidAlphabetSize {
                size,
                max: MAX_ALPHABET,
            });
        }
        Ok(Alphabet { size })
    }

    /// Number of states.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Iterator over all states.
    pub fn states(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    /// The event containing every state.
    pub fn full_event(&self) -> Event {
        Event {
            alphabet: *self,
            members: self.states().collect(),
        }
    }

    /// The empty event.
    pub fn empty_event(&self) -> Event {
        Event {
            alphabet: *self,
            members: Vec::new(),
        }
    }

    /// The singleton event `{state}`.
    pub fn singleton(&self, state: usize) -> Result<Event> {
        Event::new(*self, [state])
    }

    pub(crate) fn check_matches(&self, other: Alphabet) -> Result<()> {
        if *self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch {
                expected: self.size,
                found: other.size,
            })
        }
    }
}

/// A measurable set of states, kept sorted and deduplicated so that equality
/// is decidable and stable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event {
    alphabet: Alphabet,
    members: Vec<usize>,
}

impl Event {
    /// A new event from an arbitrary collection of states.
    pub fn new(alphabet: Alphabet, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&state) = members.iter().find(|&&m| m >= alphabet.size()) {
            return Err(Error::StateOutOfRange {
                state,
                size: alphabet.size(),
            });
        }
        Ok(Event { alphabet, members })
    }

    /// The alphabet this event lives over.
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Sorted member states.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Number of member states.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// True when no state belongs to the event.
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Membership test.
    pub fn contains(&self, state: usize) -> bool {
        self.members.binary_search(&state).is_ok()
    }

    /// Set complement within the alphabet.
    pub fn complement(&self) -> Event {
        let members = self
            .alphabet
            .states()
            .filter(|&s| !self.contains(s))
            .collect();
        Event {
            alphabet: self.alphabet,
            members,
        }
    }

    /// Set intersection.
    pub fn intersect(&self, other: &Event) -> Result<Event> {
        self.alphabet.check_matches(other.alphabet)?;
        let members = self
            .members
            .iter()
            .copied()
            .filter(|&s| other.contains(s))
            .collect();
        Ok(Event {
            alphabet: self.alphabet,
            members,
        })
    }

    /// True when the two events share no state.
    pub fn is_disjoint(&self, other: &Event) -> bool {
        self.members.iter().all(|&s| !other.contains(s))
    }
}

/// An exact probability: a rational in `[0, 1]` with a float view.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Prob(Rational);

impl Prob {
    /// Wraps a rational, validating that it lies in `[0, 1]`.
    pub fn new(value: Rational) -> Result<Self> {
        if rational::in_unit_interval(&value) {
            Ok(Prob(value))
        } else {
            Err(Error::InvalidProbability(value))
        }
    }

    /// Wraps a value that is a probability by construction.
    ///
    /// Out-of-range input here means an internal arithmetic bug, so it is a
    /// debug assertion rather than a recoverable error.
    pub(crate) fn from_exact(value: Rational) -> Self {
        debug_assert!(
            rational::in_unit_interval(&value),
            "internal probability {value} outside [0, 1]"
        );
        Prob(value)
    }

    /// Probability zero.
    pub fn zero() -> Self {
        Prob(Rational::zero())
    }

    /// Probability one.
    pub fn one() -> Self {
        Prob(Rational::one())
    }

    /// The exact rational value.
    pub fn ratio(&self) -> &Rational {
        &self.0
    }

    /// Consumes the wrapper, yielding the exact rational.
    pub fn into_ratio(self) -> Rational {
        self.0
    }

    /// Float view.
    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.0)
    }
}

impl std::fmt::Display for Prob {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// An exact probability vector over an alphabet — one point of the simplex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dist {
    alphabet: Alphabet,
    probs: Vec<Rational>,
}

impl Dist {
    /// A distribution from per-state probabilities, which must be nonnegative
    /// and sum to exactly 1.
    pub fn new(probs: Vec<Rational>) -> Result<Self> {
        let alphabet = Alphabet::new(probs.len())?;
        if probs.iter().any(|p| p.is_negative()) {
            return Err(Error::InvalidDistribution("negative entry".into()));
        }
        let total: Rational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {total}, not 1"
            )));
        }
        Ok(Dist { alphabet, probs })
    }

    /// Uniform distribution over `alphabet`.
    pub fn uniform(alphabet: Alphabet) -> Self {
        let s = alphabet.size();
        let p = Rational::new(1.into(), (s as i64).into());
        Dist {
            alphabet,
            probs: vec![p; s],
        }
    }

    /// The alphabet this distribution lives over.
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Per-state probabilities.
    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    /// Probability of a single state.
    pub fn state_prob(&self, state: usize) -> &Rational {
        &self.probs[state]
    }

    /// Evaluation map: the exact probability of an event.
    ///
    /// ```
    /// use finetti::measures::{Alphabet, Dist, Event};
    /// use finetti::rational::rat;
    ///
    /// let d = Dist::new(vec![rat(1, 5), rat(4, 5)]).unwrap();
    /// let b = Event::new(d.alphabet(), [1]).unwrap();
    /// assert_eq!(*d.prob(&b).unwrap().ratio(), rat(4, 5));
    /// ```
    pub fn prob(&self, event: &Event) -> Result<Prob> {
        self.alphabet.check_matches(event.alphabet())?;
        let total = event.members().iter().map(|&s| &self.probs[s]).sum();
        Ok(Prob::from_exact(total))
    }
}

fn check_tuple(events: &[Event]) -> Result<Alphabet> {
    let Some(first) = events.first() else {
        return Err(Error::InvalidParameter(
            "event tuple must be nonempty".into(),
        ));
    };
    if events.len() > MAX_TUPLE {
        return Err(Error::TooManyEvents {
            len: events.len(),
            cap: MAX_TUPLE,
        });
    }
    let alphabet = first.alphabet();
    for e in events {
        alphabet.check_matches(e.alphabet())?;
    }
    Ok(alphabet)
}

/// The `2^k` pairwise-disjoint atoms generated by `k` events.
///
/// The atom at index `mask` is the intersection of `B_i` for every bit `i`
/// set in `mask` with the complements of the remaining events, so the union
/// of the atoms whose bit `i` is set reconstructs `B_i` exactly. Empty atoms
/// are kept so that indexing by mask is total.
///
/// ```
/// use finetti::measures::{atoms_of, Alphabet, Event};
///
/// let a = Alphabet::new(3).unwrap();
/// let b1 = Event::new(a, [0, 1]).unwrap();
/// let b2 = Event::new(a, [1, 2]).unwrap();
/// let atoms = atoms_of(&[b1, b2]).unwrap();
/// assert_eq!(atoms[0b11].members(), &[1]); // in both
/// assert_eq!(atoms[0b01].members(), &[0]); // in B1 only
/// assert_eq!(atoms[0b10].members(), &[2]); // in B2 only
/// assert!(atoms[0b00].is_empty());
/// ```
pub fn atoms_of(events: &[Event]) -> Result<Vec<Event>> {
    let alphabet = check_tuple(events)?;
    let k = events.len();
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); 1 << k];
    for state in alphabet.states() {
        let mut mask = 0usize;
        for (i, e) in events.iter().enumerate() {
            if e.contains(state) {
                mask |= 1 << i;
            }
        }
        buckets[mask].push(state);
    }
    Ok(buckets
        .into_iter()
        .map(|members| Event { alphabet, members })
        .collect())
}

/// Rewrites the joint event `{X_1 in B_1, ..., X_k in B_k}` as a disjoint
/// union of tuple events whose entries are pairwise disjoint or equal.
///
/// Each returned tuple assigns to position `i` one of the nonempty atoms
/// contained in `B_i`; tuples that would contain an empty atom are omitted.
/// Summing any product measure over the returned tuples reproduces the
/// product over the original events (finite additivity).
pub fn disjointify_event_tuple(events: &[Event]) -> Result<Vec<Vec<Event>>> {
    check_tuple(events)?;
    let atoms = atoms_of(events)?;
    let k = events.len();
    // choices[i]: masks of nonempty atoms contained in B_i.
    let choices: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            (0..atoms.len())
                .filter(|&mask| mask & (1 << i) != 0 && !atoms[mask].is_empty())
                .collect()
        })
        .collect();
    let mut tuples = Vec::new();
    let mut current = vec![0usize; k];
    fn recurse(
        i: usize,
        choices: &[Vec<usize>],
        atoms: &[Event],
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<Event>>,
    ) {
        if i == choices.len() {
            out.push(current.iter().map(|&m| atoms[m].clone()).collect());
            return;
        }
        for &mask in &choices[i] {
            current[i] = mask;
            recurse(i + 1, choices, atoms, current, out);
        }
    }
    recurse(0, &choices, &atoms, &mut current, &mut tuples);
    Ok(tuples)
}
