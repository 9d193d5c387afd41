//! Weighted power-commutator presentations of finite 2-groups and the
//! collection machinery that gives every element a unique normal form.
//!
//! All pc-generators have relative order 2, so elements are exponent
//! bit-vectors and collection reduces to F2 bookkeeping driven by the power
//! and commutator tables. Collection is from the left: the leftmost
//! violation of the normal-form order is always rewritten first, with a
//! fixed pc-generator order (weight, then creation index), so normal forms
//! are reproducible.

use super::word::Word;
use super::GroupError;
use crate::f2::Bits;
use serde::{Deserialize, Serialize};

/// An element of the presented group: the exponent vector of its normal
/// form `a_0^{e_0} ... a_{N-1}^{e_{N-1}}` with `e_i` in F2.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupElement(pub(crate) Bits);

impl GroupElement {
    pub fn bits(&self) -> &Bits {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_zero()
    }

    /// Indices of pc-generators appearing in the normal form, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.0.ones().collect()
    }
}

/// How a pc-generator of weight >= 2 was introduced.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Definition {
    /// Defined by the power relation `a_i^2 = ... a_t ...`.
    Power { i: usize },
    /// Defined by the commutator relation `[a_j, a_i] = ... a_t ...`.
    Commutator { j: usize, i: usize },
}

/// The six labelled Cayley generators `x0^{+-1}, x1^{+-1}, x3^{+-1}`
/// (with `x3 = x1^-1 x0^-1`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum GenLabel {
    X0,
    X0Inv,
    X1,
    X1Inv,
    X3,
    X3Inv,
}

impl GenLabel {
    pub const ALL: [GenLabel; 6] = [
        GenLabel::X0,
        GenLabel::X0Inv,
        GenLabel::X1,
        GenLabel::X1Inv,
        GenLabel::X3,
        GenLabel::X3Inv,
    ];

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&l| l == self).unwrap()
    }

    pub fn from_index(i: usize) -> GenLabel {
        Self::ALL[i]
    }

    pub fn inverse(self) -> GenLabel {
        match self {
            GenLabel::X0 => GenLabel::X0Inv,
            GenLabel::X0Inv => GenLabel::X0,
            GenLabel::X1 => GenLabel::X1Inv,
            GenLabel::X1Inv => GenLabel::X1,
            GenLabel::X3 => GenLabel::X3Inv,
            GenLabel::X3Inv => GenLabel::X3,
        }
    }

    /// The digit 0, 1 or 3 naming the underlying generator.
    pub fn base_digit(self) -> u8 {
        match self {
            GenLabel::X0 | GenLabel::X0Inv => 0,
            GenLabel::X1 | GenLabel::X1Inv => 1,
            GenLabel::X3 | GenLabel::X3Inv => 3,
        }
    }

    pub fn is_inverse(self) -> bool {
        matches!(self, GenLabel::X0Inv | GenLabel::X1Inv | GenLabel::X3Inv)
    }
}

/// Borrowed relation tables; shared between finished presentations and the
/// extended tables used while lifting to the next class.
pub(crate) struct Tables<'a> {
    pub n: usize,
    pub powers: &'a [Bits],
    pub comms: &'a [Vec<Bits>],
}

impl Tables<'_> {
    /// Collects a word (letters are pc-generator indices) to its normal
    /// form. Letters of relation right-hand sides always have strictly
    /// larger index, which bounds the rewriting.
    pub fn collect(&self, seed: &[u16], rest: &[u16]) -> Bits {
        // `seed` must be strictly ascending (a normal form); `rest` is
        // arbitrary.
        let mut collected: Vec<u16> = seed.to_vec();
        let mut stack: Vec<u16> = rest.iter().rev().copied().collect();
        let mut scratch: Vec<u16> = Vec::new();
        while let Some(g) = stack.pop() {
            match collected.last().copied() {
                None => collected.push(g),
                Some(h) if h < g => collected.push(g),
                Some(h) if h == g => {
                    collected.pop();
                    self.push_rhs(&mut stack, &mut scratch, &self.powers[g as usize]);
                }
                Some(h) => {
                    // leftmost violation: ... h g ...  ->  ... g h [h,g] ...
                    collected.pop();
                    self.push_rhs(
                        &mut stack,
                        &mut scratch,
                        &self.comms[h as usize][g as usize],
                    );
                    stack.push(h);
                    stack.push(g);
                }
            }
        }
        let mut out = Bits::zeros(self.n);
        for g in collected {
            out.flip(g as usize);
        }
        out
    }

    fn push_rhs(&self, stack: &mut Vec<u16>, scratch: &mut Vec<u16>, rhs: &Bits) {
        scratch.clear();
        scratch.extend(rhs.ones().map(|i| i as u16));
        while let Some(g) = scratch.pop() {
            stack.push(g);
        }
    }

    fn letters(bits: &Bits) -> Vec<u16> {
        bits.ones().map(|i| i as u16).collect()
    }

    pub fn multiply(&self, a: &Bits, b: &Bits) -> Bits {
        self.collect(&Self::letters(a), &Self::letters(b))
    }

    /// Least 2-power exponent annihilating `a`, as (order, successive
    /// squares `a, a^2, a^4, ...` below the order).
    fn order_with_squares(&self, a: &Bits, max_doublings: usize) -> Result<(u64, Vec<Bits>), GroupError> {
        if a.is_zero() {
            return Ok((1, Vec::new()));
        }
        let mut squares = vec![a.clone()];
        let mut cur = a.clone();
        for _ in 0..max_doublings {
            cur = self.multiply(&cur, &cur);
            if cur.is_zero() {
                return Ok((1u64 << squares.len(), squares));
            }
            squares.push(cur.clone());
        }
        Err(GroupError::Internal(
            "element order exceeded the class bound; tables are corrupt".into(),
        ))
    }

    pub fn order(&self, a: &Bits, max_doublings: usize) -> Result<u64, GroupError> {
        Ok(self.order_with_squares(a, max_doublings)?.0)
    }

    /// `a^-1 = a^(2^l - 1)`, a product of the stored successive squares.
    pub fn inverse(&self, a: &Bits, max_doublings: usize) -> Result<Bits, GroupError> {
        let (_, squares) = self.order_with_squares(a, max_doublings)?;
        let mut acc = Bits::zeros(self.n);
        for s in &squares {
            acc = self.multiply(&acc, s);
        }
        Ok(acc)
    }

    pub fn power(&self, a: &Bits, e: u64) -> Bits {
        let mut acc = Bits::zeros(self.n);
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.multiply(&base, &base);
            }
        }
        acc
    }

    /// Evaluates a free-group word at the given generator images.
    pub fn eval_word(
        &self,
        word: &Word,
        images: &[Bits],
        max_doublings: usize,
    ) -> Result<Bits, GroupError> {
        let mut acc = Bits::zeros(self.n);
        for l in word.letters() {
            let img = &images[l.gen];
            let factor = if l.inverse {
                self.inverse(img, max_doublings)?
            } else {
                img.clone()
            };
            acc = self.multiply(&acc, &factor);
        }
        Ok(acc)
    }

    /// Collects every associativity/power test word both ways and hands the
    /// two results to `visit`. Used to enforce consistency while lifting and
    /// to verify it afterwards.
    pub fn visit_test_words<E>(
        &self,
        upto: usize,
        mut visit: impl FnMut(&'static str, usize, usize, usize, Bits, Bits) -> Result<(), E>,
    ) -> Result<(), E> {
        let gen = |i: usize| vec![i as u16];
        for i in 0..upto {
            // a_i^2 * a_i  vs  a_i * a_i^2
            let lhs = self.collect(&[], &[Self::letters(&self.powers[i]), gen(i)].concat());
            let rhs = self.collect(&[], &[gen(i), Self::letters(&self.powers[i])].concat());
            visit("power-assoc", i, i, i, lhs, rhs)?;
        }
        for j in 0..upto {
            for i in 0..j {
                // a_j^2 * a_i  vs  a_j * (a_j * a_i)
                let ji = self.collect(&[], &[j as u16, i as u16]);
                let lhs = self.collect(&[], &[Self::letters(&self.powers[j]), gen(i)].concat());
                let rhs = self.collect(&[], &[gen(j), Self::letters(&ji)].concat());
                visit("square-left", j, j, i, lhs, rhs)?;
                // (a_j * a_i) * a_i  vs  a_j * a_i^2
                let lhs = self.collect(&[], &[Self::letters(&ji), gen(i)].concat());
                let rhs = self.collect(&[], &[gen(j), Self::letters(&self.powers[i])].concat());
                visit("square-right", j, i, i, lhs, rhs)?;
            }
        }
        for k in 0..upto {
            for j in 0..k {
                for i in 0..j {
                    // a_k * (a_j * a_i)  vs  (a_k * a_j) * a_i
                    let ji = self.collect(&[], &[j as u16, i as u16]);
                    let kj = self.collect(&[], &[k as u16, j as u16]);
                    let lhs = self.collect(&[], &[gen(k), Self::letters(&ji)].concat());
                    let rhs = self.collect(&[], &[Self::letters(&kj), gen(i)].concat());
                    visit("assoc", k, j, i, lhs, rhs)?;
                }
            }
        }
        Ok(())
    }
}

/// A consistent weighted power-commutator presentation of a finite 2-group
/// of order `2^N`, together with the images of the original presentation
/// generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPresentation {
    pub(crate) class: usize,
    pub(crate) weights: Vec<usize>,
    pub(crate) powers: Vec<Bits>,
    pub(crate) comms: Vec<Vec<Bits>>,
    pub(crate) images: Vec<Bits>,
    pub(crate) definitions: Vec<Option<Definition>>,
    pub(crate) layer_sizes: Vec<usize>,
}

impl PcPresentation {
    pub fn class(&self) -> usize {
        self.class
    }

    /// Number of pc-generators; the group order is `2^ngens`.
    pub fn ngens(&self) -> usize {
        self.weights.len()
    }

    pub fn order_log2(&self) -> usize {
        self.ngens()
    }

    /// Group order as an integer; panics above 2^127.
    pub fn order(&self) -> u128 {
        assert!(self.ngens() < 128, "order does not fit in u128");
        1u128 << self.ngens()
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    /// Observed size of each exponent-2 layer, one entry per class.
    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn definitions(&self) -> &[Option<Definition>] {
        &self.definitions
    }

    pub(crate) fn tables(&self) -> Tables<'_> {
        Tables {
            n: self.ngens(),
            powers: &self.powers,
            comms: &self.comms,
        }
    }

    fn max_doublings(&self) -> usize {
        self.class + 4
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(Bits::zeros(self.ngens()))
    }

    /// The `i`-th pc-generator as an element.
    pub fn pc_generator(&self, i: usize) -> GroupElement {
        GroupElement(Bits::unit(self.ngens(), i))
    }

    /// Image of the `i`-th presentation generator (`x0`, `x1`).
    pub fn image(&self, i: usize) -> GroupElement {
        GroupElement(self.images[i].clone())
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(self.tables().multiply(&a.0, &b.0))
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        GroupElement(
            self.tables()
                .inverse(&a.0, self.max_doublings())
                .expect("consistent presentation"),
        )
    }

    pub fn power(&self, a: &GroupElement, e: u64) -> GroupElement {
        GroupElement(self.tables().power(&a.0, e))
    }

    /// Least `m = 2^l` with `a^m = e`, by repeated squaring.
    pub fn element_order(&self, a: &GroupElement) -> u64 {
        self.tables()
            .order(&a.0, self.max_doublings())
            .expect("consistent presentation")
    }

    pub fn eval_word(&self, w: &Word) -> GroupElement {
        GroupElement(
            self.tables()
                .eval_word(w, &self.images, self.max_doublings())
                .expect("consistent presentation"),
        )
    }

    /// All `2^N` elements in lexicographic order of their exponent vectors
    /// (generator 0 most significant); the identity comes first.
    pub fn enumerate(&self, cap_log2: usize) -> Result<Vec<GroupElement>, GroupError> {
        let n = self.ngens();
        if n > cap_log2 {
            return Err(GroupError::EnumerationCap {
                needed_log2: n,
                cap_log2,
            });
        }
        let count = 1usize << n;
        let mut out = Vec::with_capacity(count);
        for idx in 0..count {
            out.push(self.element_at_lex_index(idx));
        }
        Ok(out)
    }

    pub fn element_at_lex_index(&self, idx: usize) -> GroupElement {
        let n = self.ngens();
        let mut b = Bits::zeros(n);
        for g in 0..n {
            if idx >> (n - 1 - g) & 1 == 1 {
                b.set(g, true);
            }
        }
        GroupElement(b)
    }

    pub fn lex_index(&self, a: &GroupElement) -> usize {
        let n = self.ngens();
        let mut idx = 0usize;
        for g in a.0.ones() {
            idx |= 1 << (n - 1 - g);
        }
        idx
    }

    /// The six labelled Cayley generators; coinciding elements (as happens
    /// for the involutions of the class-1 quotient) are kept with their
    /// distinct labels.
    pub fn generator_set(&self) -> [(GenLabel, GroupElement); 6] {
        let x0 = self.image(0);
        let x1 = self.image(1);
        let x3 = self.inverse(&self.multiply(&x0, &x1));
        [
            (GenLabel::X0, x0.clone()),
            (GenLabel::X0Inv, self.inverse(&x0)),
            (GenLabel::X1, x1.clone()),
            (GenLabel::X1Inv, self.inverse(&x1)),
            (GenLabel::X3, x3.clone()),
            (GenLabel::X3Inv, self.inverse(&x3)),
        ]
    }

    /// Generator elements with duplicates collapsed, in first-seen order.
    pub fn distinct_generator_elements(&self) -> Vec<GroupElement> {
        let mut out: Vec<GroupElement> = Vec::new();
        for (_, g) in self.generator_set() {
            if !out.contains(&g) {
                out.push(g);
            }
        }
        out
    }

    /// Re-collects every associativity and power test word and checks both
    /// bracketings agree. A failure means the tables do not define a group.
    pub fn consistency_check(&self) -> Result<(), GroupError> {
        self.tables()
            .visit_test_words(self.ngens(), |name, a, b, c, lhs, rhs| {
                if lhs == rhs {
                    Ok(())
                } else {
                    Err(GroupError::Internal(format!(
                        "consistency test {name}({a},{b},{c}) failed: {lhs:?} != {rhs:?}"
                    )))
                }
            })
    }

    /// Kills the top-weight layer, producing the class `k-1` quotient and
    /// the projection on pc-generators (`None` for killed generators).
    pub fn project(&self) -> Result<(PcPresentation, Projection), GroupError> {
        if self.class < 2 {
            return Err(GroupError::Internal(
                "projection needs class >= 2".into(),
            ));
        }
        let keep = self
            .weights
            .iter()
            .filter(|&&w| w < self.class)
            .count();
        let small = PcPresentation {
            class: self.class - 1,
            weights: self.weights[..keep].to_vec(),
            powers: self.powers[..keep].iter().map(|b| b.truncated(keep)).collect(),
            comms: self.comms[..keep]
                .iter()
                .map(|row| row.iter().map(|b| b.truncated(keep)).collect())
                .collect(),
            images: self.images.iter().map(|b| b.truncated(keep)).collect(),
            definitions: self.definitions[..keep].to_vec(),
            layer_sizes: self.layer_sizes[..self.layer_sizes.len() - 1].to_vec(),
        };
        small.consistency_check()?;
        let map = (0..self.ngens())
            .map(|i| if i < keep { Some(i) } else { None })
            .collect();
        Ok((
            small,
            Projection {
                generator_map: map,
                kernel_log2: self.ngens() - keep,
            },
        ))
    }

    /// Projects an element of this group to the class `k-1` quotient.
    pub fn project_element(&self, a: &GroupElement, small: &PcPresentation) -> GroupElement {
        GroupElement(a.0.truncated(small.ngens()))
    }
}

/// The projection data of `G_{k} -> G_{k-1}`.
#[derive(Clone, Debug)]
pub struct Projection {
    /// Image of each pc-generator: `Some(index)` or `None` when killed.
    pub generator_map: Vec<Option<usize>>,
    /// Kernel size is `2^kernel_log2`.
    pub kernel_log2: usize,
}

/// Serialized form of a presentation; relation tables as hex bit-strings.
#[derive(Serialize, Deserialize)]
struct PcpJson {
    format: String,
    version: u32,
    class: usize,
    ngens: usize,
    weights: Vec<usize>,
    powers: Vec<String>,
    commutators: Vec<Vec<String>>,
    images: Vec<String>,
    definitions: Vec<Option<Definition>>,
    layer_sizes: Vec<usize>,
}

const PCP_FORMAT: &str = "trivex-pcp";
const PCP_VERSION: u32 = 1;

impl PcPresentation {
    pub fn to_json(&self) -> String {
        let n = self.ngens();
        let doc = PcpJson {
            format: PCP_FORMAT.to_string(),
            version: PCP_VERSION,
            class: self.class,
            ngens: n,
            weights: self.weights.clone(),
            powers: self.powers.iter().map(|b| b.to_hex()).collect(),
            commutators: self
                .comms
                .iter()
                .map(|row| row.iter().map(|b| b.to_hex()).collect())
                .collect(),
            images: self.images.iter().map(|b| b.to_hex()).collect(),
            definitions: self.definitions.clone(),
            layer_sizes: self.layer_sizes.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<PcPresentation, GroupError> {
        let doc: PcpJson =
            serde_json::from_str(s).map_err(|e| GroupError::Format(e.to_string()))?;
        if doc.format != PCP_FORMAT || doc.version != PCP_VERSION {
            return Err(GroupError::Format(format!(
                "unsupported document {}/{}",
                doc.format, doc.version
            )));
        }
        let n = doc.ngens;
        let parse = |s: &String| {
            Bits::from_hex(s, n).ok_or_else(|| GroupError::Format(format!("bad hex field {s:?}")))
        };
        if doc.weights.len() != n
            || doc.powers.len() != n
            || doc.commutators.len() != n
            || doc.definitions.len() != n
        {
            return Err(GroupError::Format("table sizes disagree with ngens".into()));
        }
        let powers = doc.powers.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
        let mut comms = Vec::with_capacity(n);
        for (j, row) in doc.commutators.iter().enumerate() {
            if row.len() != j {
                return Err(GroupError::Format("ragged commutator table".into()));
            }
            comms.push(row.iter().map(parse).collect::<Result<Vec<_>, _>>()?);
        }
        let images = doc.images.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
        let pcp = PcPresentation {
            class: doc.class,
            weights: doc.weights,
            powers,
            comms,
            images,
            definitions: doc.definitions,
            layer_sizes: doc.layer_sizes,
        };
        pcp.consistency_check()?;
        Ok(pcp)
    }
}
