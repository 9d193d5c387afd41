//! The 2-quotient algorithm: class-by-class computation of the quotients
//! `G/P_k(G)` of the lower exponent-2 series `P_k(G) = [P_{k-1}(G),G] P_{k-1}(G)^2`.
//!
//! Each lift extends the consistent class-`c` presentation by one central
//! elementary-abelian tail per non-defining relation, enforces consistency
//! by collecting all associativity/power test words, imposes the original
//! relators, and eliminates redundant tails by Gaussian elimination over F2.
//! Surviving tails become the weight-`c+1` pc-generators.

use super::pcp::{Definition, PcPresentation, Tables};
use super::word::Presentation;
use super::GroupError;
use crate::f2::{Bits, Echelon};

/// Resource limits for the quotient computation.
#[derive(Clone, Copy, Debug)]
pub struct QuotientLimits {
    pub max_class: usize,
    /// Cap on generators plus tails during a lift.
    pub max_gens: usize,
}

impl Default for QuotientLimits {
    fn default() -> Self {
        QuotientLimits {
            max_class: 16,
            max_gens: 4096,
        }
    }
}

/// Computes a consistent pc-presentation of `G/P_class(G)` for the given
/// finite presentation, with `p = 2`.
pub fn pquotient(
    pres: &Presentation,
    class: usize,
    limits: &QuotientLimits,
) -> Result<PcPresentation, GroupError> {
    if class == 0 || pres.generators == 0 {
        return Err(GroupError::Format(
            "need class >= 1 and at least one generator".into(),
        ));
    }
    if class > limits.max_class {
        return Err(GroupError::ClassCap {
            requested: class,
            cap: limits.max_class,
        });
    }
    for r in &pres.relators {
        if r.max_generator().is_some_and(|g| g >= pres.generators) {
            return Err(GroupError::Format("relator mentions unknown generator".into()));
        }
    }
    let mut pcp = class_one_quotient(pres)?;
    while pcp.class() < class {
        let lifted = lift_one_class(&pcp, pres, limits)?;
        if lifted.ngens() == pcp.ngens() {
            // the series has stabilised: all further quotients coincide
            pcp = lifted;
            while pcp.class() < class {
                pcp.class += 1;
                pcp.layer_sizes.push(0);
            }
            break;
        }
        pcp = lifted;
    }
    Ok(pcp)
}

/// The largest elementary abelian quotient. Relators with odd exponent sums
/// would collapse generator images into each other, which this engine does
/// not support (the tower presentation has even sums throughout).
fn class_one_quotient(pres: &Presentation) -> Result<PcPresentation, GroupError> {
    let n = pres.generators;
    for r in &pres.relators {
        if r.exponent_sums(n).iter().any(|s| s.rem_euclid(2) != 0) {
            return Err(GroupError::WeightOneCollapse);
        }
    }
    Ok(PcPresentation {
        class: 1,
        weights: vec![1; n],
        powers: vec![Bits::zeros(n); n],
        comms: (0..n).map(|j| vec![Bits::zeros(n); j]).collect(),
        images: (0..n).map(|i| Bits::unit(n, i)).collect(),
        definitions: vec![None; n],
        layer_sizes: vec![n],
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Rel {
    Pow(usize),
    Comm(usize, usize),
}

/// One lift `G/P_c -> G/P_{c+1}`.
fn lift_one_class(
    pcp: &PcPresentation,
    pres: &Presentation,
    limits: &QuotientLimits,
) -> Result<PcPresentation, GroupError> {
    let m = pcp.ngens();
    let class = pcp.class();

    // Relations that are definitions of existing generators carry no tail.
    let mut is_def_pow = vec![false; m];
    let mut is_def_comm = vec![vec![false; m]; m];
    for def in pcp.definitions.iter().flatten() {
        match *def {
            Definition::Power { i } => is_def_pow[i] = true,
            Definition::Commutator { j, i } => is_def_comm[j][i] = true,
        }
    }
    let mut rels: Vec<Rel> = Vec::new();
    for i in 0..m {
        if !is_def_pow[i] {
            rels.push(Rel::Pow(i));
        }
    }
    for j in 0..m {
        for i in 0..j {
            if !is_def_comm[j][i] {
                rels.push(Rel::Comm(j, i));
            }
        }
    }
    let ntails = rels.len();
    let ntot = m + ntails;
    if ntot > limits.max_gens {
        return Err(GroupError::ClassCap {
            requested: ntot,
            cap: limits.max_gens,
        });
    }

    // Extended tables: old relations gain their tail; tails are central of
    // order 2 (trivial rows).
    let mut powers: Vec<Bits> = pcp.powers.iter().map(|b| b.extended(ntot)).collect();
    powers.resize(ntot, Bits::zeros(ntot));
    let mut comms: Vec<Vec<Bits>> = pcp
        .comms
        .iter()
        .map(|row| row.iter().map(|b| b.extended(ntot)).collect())
        .collect();
    for j in m..ntot {
        comms.push(vec![Bits::zeros(ntot); j]);
    }
    for (t, rel) in rels.iter().enumerate() {
        let tail = m + t;
        match *rel {
            Rel::Pow(i) => powers[i].flip(tail),
            Rel::Comm(j, i) => comms[j][i].flip(tail),
        }
    }

    // Consistency: collect all test words among the old generators; the two
    // bracketings must agree up to tails. Any difference on old generators
    // means the incoming presentation was corrupt.
    let mut consistency = Echelon::new();
    {
        let tables = Tables {
            n: ntot,
            powers: &powers,
            comms: &comms,
        };
        tables.visit_test_words(m, |name, a, b, c, lhs, rhs| {
            let mut diff = lhs;
            diff.xor_assign(&rhs);
            if diff.is_zero() {
                return Ok(());
            }
            if diff.lowest_one().is_some_and(|l| l < m) {
                return Err(GroupError::Internal(format!(
                    "inconsistency on old generators in test {name}({a},{b},{c})"
                )));
            }
            consistency.add_row(diff);
            Ok(())
        })?;
    }
    substitute(&consistency, &mut powers, &mut comms);

    // The tables now present the 2-cover; impose the original relators.
    let mut imposed = Echelon::new();
    {
        let tables = Tables {
            n: ntot,
            powers: &powers,
            comms: &comms,
        };
        let images: Vec<Bits> = pcp.images.iter().map(|b| b.extended(ntot)).collect();
        for r in &pres.relators {
            let v = tables.eval_word(r, &images, class + 4)?;
            if v.lowest_one().is_some_and(|l| l < m) {
                return Err(GroupError::Internal(
                    "relator value leaves the multiplicator".into(),
                ));
            }
            imposed.add_row(v);
        }
    }
    substitute(&imposed, &mut powers, &mut comms);

    // Surviving tails become the new weight-(c+1) generators.
    let survivors: Vec<usize> = (m..ntot)
        .filter(|&t| !consistency.is_pivot(t) && !imposed.is_pivot(t))
        .collect();
    let nnew = survivors.len();
    let nfinal = m + nnew;
    let mut remap: Vec<Option<usize>> = vec![None; ntot];
    for i in 0..m {
        remap[i] = Some(i);
    }
    for (pos, &t) in survivors.iter().enumerate() {
        remap[t] = Some(m + pos);
    }
    let remap_bits = |b: &Bits| -> Result<Bits, GroupError> {
        let mut out = Bits::zeros(nfinal);
        for i in b.ones() {
            match remap[i] {
                Some(j) => out.set(j, true),
                None => {
                    return Err(GroupError::Internal(
                        "eliminated tail survived substitution".into(),
                    ))
                }
            }
        }
        Ok(out)
    };

    let mut definitions = pcp.definitions.clone();
    for &t in &survivors {
        definitions.push(Some(match rels[t - m] {
            Rel::Pow(i) => Definition::Power { i },
            Rel::Comm(j, i) => Definition::Commutator { j, i },
        }));
    }
    let mut weights = pcp.weights.clone();
    weights.extend(std::iter::repeat(class + 1).take(nnew));
    let mut layer_sizes = pcp.layer_sizes.clone();
    layer_sizes.push(nnew);

    let mut new_powers = Vec::with_capacity(nfinal);
    for i in 0..m {
        new_powers.push(remap_bits(&powers[i])?);
    }
    new_powers.resize(nfinal, Bits::zeros(nfinal));
    let mut new_comms = Vec::with_capacity(nfinal);
    for j in 0..m {
        let mut row = Vec::with_capacity(j);
        for i in 0..j {
            row.push(remap_bits(&comms[j][i])?);
        }
        new_comms.push(row);
    }
    for j in m..nfinal {
        new_comms.push(vec![Bits::zeros(nfinal); j]);
    }

    let lifted = PcPresentation {
        class: class + 1,
        weights,
        powers: new_powers,
        comms: new_comms,
        images: pcp.images.iter().map(|b| b.extended(nfinal)).collect(),
        definitions,
        layer_sizes,
    };
    lifted.consistency_check()?;
    for r in &pres.relators {
        if !lifted.eval_word(r).is_identity() {
            return Err(GroupError::Internal(
                "relator does not vanish in the lifted quotient".into(),
            ));
        }
    }
    Ok(lifted)
}

/// Replaces each pivot coordinate by its expression over non-pivots in every
/// relation table entry. Rows are mutually reduced, so one pass suffices.
fn substitute(ech: &Echelon, powers: &mut [Bits], comms: &mut [Vec<Bits>]) {
    let apply = |bits: &mut Bits| {
        for (row, &p) in ech.rows().iter().zip(ech.pivots()) {
            if bits.get(p) {
                bits.xor_assign(row);
            }
        }
    };
    for b in powers.iter_mut() {
        apply(b);
    }
    for row in comms.iter_mut() {
        for b in row.iter_mut() {
            apply(b);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::word::{tower_presentation, tower_relators, Word};

    fn tower(k: usize) -> PcPresentation {
        pquotient(&tower_presentation(), k, &QuotientLimits::default()).unwrap()
    }

    #[test]
    fn class_one_is_klein_four() {
        let g1 = tower(1);
        assert_eq!(g1.order_log2(), 2);
        let x0 = g1.image(0);
        assert!(g1.multiply(&x0, &x0).is_identity());
        assert_eq!(g1.distinct_generator_elements().len(), 3);
    }

    #[test]
    fn group_sizes_match_the_tower_formula() {
        // N_k = 8*floor(k/3) + 3*(k mod 3) - 1 with equality for small k
        let expect = |k: usize| 8 * (k / 3) + 3 * (k % 3) - 1;
        for k in 1..=6 {
            let g = tower(k);
            assert_eq!(g.order_log2(), expect(k), "wrong size at class {k}");
            assert_eq!(g.class(), k);
        }
    }

    #[test]
    fn observed_layer_sizes() {
        let g6 = tower(6);
        assert_eq!(g6.layer_sizes(), &[2, 3, 2, 3, 3, 2]);
        assert_eq!(g6.weights().iter().max(), Some(&6));
    }

    #[test]
    fn generator_orders() {
        // ord(x_i) = 2^(floor(log2 k) + 1) in the class-k quotient
        for k in 2..=6 {
            let g = tower(k);
            let nk = (k as f64).log2().floor() as u32 + 1;
            let [x0p, _, x1p, _, x3p, _] = g.generator_set();
            for (_, x) in [x0p, x1p, x3p] {
                assert_eq!(g.element_order(&x), 1 << nk, "order at class {k}");
            }
        }
        // explicit anchors: |x1| = 4 in G_2, |x3| = 8 in G_4
        let g2 = tower(2);
        assert_eq!(g2.element_order(&g2.image(1)), 4);
        let g4 = tower(4);
        let x3 = g4.generator_set()[4].1.clone();
        assert_eq!(g4.element_order(&x3), 8);
    }

    #[test]
    fn powers_of_x0_in_g2() {
        let g2 = tower(2);
        let x0 = g2.image(0);
        let sq = g2.multiply(&x0, &x0);
        assert!(!sq.is_identity());
        assert!(g2.multiply(&sq, &sq).is_identity());
        assert_eq!(g2.element_order(&g2.identity()), 1);
    }

    #[test]
    fn relators_vanish_in_every_quotient() {
        for k in 1..=6 {
            let g = tower(k);
            for r in tower_relators() {
                assert!(g.eval_word(&r).is_identity(), "relator alive at class {k}");
            }
        }
    }

    #[test]
    fn defining_relation_x0_x1_x3() {
        for k in 1..=5 {
            let g = tower(k);
            let set = g.generator_set();
            let prod = g.multiply(&g.multiply(&set[0].1, &set[2].1), &set[4].1);
            assert!(prod.is_identity());
        }
    }

    #[test]
    fn group_laws_on_random_triples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for k in [2usize, 3] {
            let g = tower(k);
            let count = 1usize << g.order_log2();
            for _ in 0..1000 {
                let a = g.element_at_lex_index(rng.gen_range(0..count));
                let b = g.element_at_lex_index(rng.gen_range(0..count));
                let c = g.element_at_lex_index(rng.gen_range(0..count));
                let ab_c = g.multiply(&g.multiply(&a, &b), &c);
                let a_bc = g.multiply(&a, &g.multiply(&b, &c));
                assert_eq!(ab_c, a_bc);
                assert!(g.multiply(&a, &g.inverse(&a)).is_identity());
            }
            // identity law on random elements
            let e = g.identity();
            for _ in 0..100 {
                let a = g.element_at_lex_index(rng.gen_range(0..count));
                assert_eq!(g.multiply(&e, &a), a);
                assert_eq!(g.multiply(&a, &e), a);
            }
        }
    }

    #[test]
    fn enumerate_is_lexicographic_and_complete() {
        let g2 = tower(2);
        let all = g2.enumerate(16).unwrap();
        assert_eq!(all.len(), 32);
        assert!(all[0].is_identity());
        for (i, el) in all.iter().enumerate() {
            assert_eq!(g2.lex_index(el), i);
        }
        let g3 = tower(3);
        assert_eq!(g3.enumerate(16).unwrap().len(), 128);
        assert!(matches!(
            g3.enumerate(5),
            Err(GroupError::EnumerationCap { .. })
        ));
    }

    #[test]
    fn projection_tower() {
        for k in 2..=6 {
            let big = tower(k);
            let (small, proj) = big.project().unwrap();
            assert_eq!(small, tower(k - 1), "projection vs direct at {k}");
            assert_eq!(
                proj.kernel_log2,
                big.order_log2() - small.order_log2()
            );
            // generator images commute with the projection
            for i in 0..2 {
                let projected = big.project_element(&big.image(i), &small);
                assert_eq!(projected, small.image(i));
            }
        }
        // anchors: kernel sizes 2^2 and 2^3
        let (_, p32) = tower(3).project().unwrap();
        assert_eq!(p32.kernel_log2, 2);
        let (_, p21) = tower(2).project().unwrap();
        assert_eq!(p21.kernel_log2, 3);
    }

    #[test]
    fn projection_composes() {
        let g3 = tower(3);
        let (g2, _) = g3.project().unwrap();
        let (g1, _) = g2.project().unwrap();
        assert_eq!(g1, tower(1));
        // projecting an element in two steps equals the direct truncation
        let a = g3.element_at_lex_index(77);
        let via = g2.project_element(&g3.project_element(&a, &g2), &g1);
        assert_eq!(via.bits(), &a.bits().truncated(2));
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let g3 = tower(3);
        let s = g3.to_json();
        let back = PcPresentation::from_json(&s).unwrap();
        assert_eq!(back, g3);
        assert_eq!(back.to_json(), s);
    }

    #[test]
    fn odd_exponent_sums_are_rejected() {
        let pres = Presentation {
            generators: 2,
            relators: vec![Word::from_powers(&[(0, 1)])],
        };
        assert!(matches!(
            pquotient(&pres, 2, &QuotientLimits::default()),
            Err(GroupError::WeightOneCollapse)
        ));
    }

    #[test]
    fn class_cap_is_enforced() {
        let limits = QuotientLimits {
            max_class: 3,
            max_gens: 4096,
        };
        assert!(matches!(
            pquotient(&tower_presentation(), 4, &limits),
            Err(GroupError::ClassCap { .. })
        ));
    }

    #[test]
    fn free_group_quotients_have_full_layers() {
        // with no relators the class-2 quotient on two generators is the
        // free exponent-2 class-2 group of order 2^5
        let free = Presentation {
            generators: 2,
            relators: vec![],
        };
        let q = pquotient(&free, 2, &QuotientLimits::default()).unwrap();
        assert_eq!(q.order_log2(), 5);
        assert_eq!(q.layer_sizes(), &[2, 3]);
    }
}
