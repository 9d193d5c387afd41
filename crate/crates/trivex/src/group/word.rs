//! Free-group words and the finite presentation driving the tower.

use serde::{Deserialize, Serialize};

/// A signed generator occurrence in a free-group word.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inverted(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }
}

/// A freely reduced word in a free group: no `x x^-1` pairs survive
/// construction.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    /// Builds a word from raw letters, cancelling adjacent inverse pairs.
    pub fn from_letters(raw: impl IntoIterator<Item = Letter>) -> Self {
        let mut letters: Vec<Letter> = Vec::new();
        for l in raw {
            match letters.last() {
                Some(&t) if t.gen == l.gen && t.inverse != l.inverse => {
                    letters.pop();
                }
                _ => letters.push(l),
            }
        }
        Word { letters }
    }

    /// Convenience constructor from (generator, exponent) runs.
    pub fn from_powers(powers: &[(usize, i32)]) -> Self {
        let mut raw = Vec::new();
        for &(g, e) in powers {
            for _ in 0..e.unsigned_abs() {
                raw.push(Letter::new(g, e < 0));
            }
        }
        Word::from_letters(raw)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverted()).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.letters.iter().chain(&other.letters).copied())
    }

    /// Largest generator index mentioned, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).max()
    }

    /// Net exponent of each of the first `ngens` generators.
    pub fn exponent_sums(&self, ngens: usize) -> Vec<i64> {
        let mut sums = vec![0i64; ngens];
        for l in &self.letters {
            sums[l.gen] += if l.inverse { -1 } else { 1 };
        }
        sums
    }
}

/// A finite group presentation: `generators` free generators modulo the
/// normal closure of `relators`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: usize,
    pub relators: Vec<Word>,
}

/// The three defining relators of the index-two subgroup
/// `G = <x0, x1 | r1, r2, r3>` of the seven-generator triangle-presentation
/// group `<x0..x6 | x_i x_{i+1} x_{i+3}>`. The exponent-2 quotients of this
/// group are the vertex groups of the whole construction.
pub fn tower_relators() -> [Word; 3] {
    let r1 = Word::from_powers(&[
        (1, 1),
        (0, 1),
        (1, 1),
        (0, 1),
        (1, 1),
        (0, 1),
        (1, -3),
        (0, -3),
    ]);
    let r2 = Word::from_powers(&[
        (1, 1),
        (0, -1),
        (1, -1),
        (0, -3),
        (1, 2),
        (0, -1),
        (1, 1),
        (0, 1),
        (1, 1),
    ]);
    let r3 = Word::from_powers(&[
        (1, 3),
        (0, -1),
        (1, 1),
        (0, 1),
        (1, 1),
        (0, 2),
        (1, 2),
        (0, 1),
        (1, 1),
        (0, 1),
    ]);
    [r1, r2, r3]
}

/// The presentation `<x0, x1 | r1, r2, r3>` whose lower exponent-2 quotients
/// `G_k` the rest of the crate is built on.
pub fn tower_presentation() -> Presentation {
    Presentation {
        generators: 2,
        relators: tower_relators().to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relators_are_reduced_with_expected_lengths() {
        let [r1, r2, r3] = tower_relators();
        assert_eq!(r1.len(), 12);
        assert_eq!(r2.len(), 12);
        assert_eq!(r3.len(), 14);
        // already freely reduced: re-reduction is a no-op
        for r in [&r1, &r2, &r3] {
            let again = Word::from_letters(r.letters().iter().copied());
            assert_eq!(&again, r);
        }
    }

    #[test]
    fn word_times_inverse_cancels() {
        let [r1, _, _] = tower_relators();
        assert!(r1.concat(&r1.inverse()).is_empty());
        assert!(r1.inverse().concat(&r1).is_empty());
    }

    #[test]
    fn exponent_sums_of_relators_are_even() {
        // class-1 quotient of the tower presentation is (Z/2)^2
        for r in tower_relators() {
            for s in r.exponent_sums(2) {
                assert_eq!(s.rem_euclid(2), 0);
            }
        }
    }

    #[test]
    fn from_powers_matches_manual_letters() {
        let w = Word::from_powers(&[(0, 2), (1, -1)]);
        assert_eq!(
            w.letters(),
            &[
                Letter::new(0, false),
                Letter::new(0, false),
                Letter::new(1, true)
            ]
        );
    }
}
