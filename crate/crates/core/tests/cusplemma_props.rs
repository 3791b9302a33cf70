use proptest::prelude::*;
use zpdehn_core::cusplemmas::{
    classify_block, coprime_pairs, dehn_pair_verdict, exhaustive_lemma_sweep, tau_block_rank,
    BlockForm, CuspBlock, PairVerdict, TauMode,
};

fn mode() -> impl Strategy<Value = TauMode> {
    prop_oneof![Just(TauMode::OneTau), Just(TauMode::TwoTau)]
}

/// Rank-2 blocks, biased towards the rank-1 shape templates.
fn block_rows() -> impl Strategy<Value = [[i64; 4]; 2]> {
    let entry = -3i64..=3;
    let free = prop::array::uniform2(prop::array::uniform4(entry.clone()));
    let proportional = (
        prop::array::uniform2(prop::array::uniform2(entry.clone())),
        -2i64..=2,
    )
        .prop_map(|(ab, m)| ab.map(|[a, b]| [a, b, m * a, m * b]));
    let one_sided = (
        prop::array::uniform2(prop::array::uniform2(entry)),
        any::<bool>(),
    )
        .prop_map(|(ab, left)| ab.map(|[a, b]| if left { [a, b, 0, 0] } else { [0, 0, a, b] }));
    prop_oneof![free, proportional, one_sided].prop_filter("rank 2", |r| {
        CuspBlock::new(*r, TauMode::OneTau).rank_q() == 2
    })
}

/// A unimodular 2x2 integer matrix as a product of elementary moves.
fn unimodular() -> impl Strategy<Value = [[i64; 2]; 2]> {
    prop::collection::vec((0u8..3, -2i64..=2), 1..6).prop_map(|moves| {
        let mut u = [[1i64, 0], [0, 1]];
        for (kind, k) in moves {
            u = match kind {
                0 => [[u[0][0] + k * u[1][0], u[0][1] + k * u[1][1]], u[1]],
                1 => [u[0], [u[1][0] + k * u[0][0], u[1][1] + k * u[0][1]]],
                _ => [u[1], [-u[0][0], -u[0][1]]],
            };
        }
        u
    })
}

fn apply(u: [[i64; 2]; 2], rows: [[i64; 4]; 2]) -> [[i64; 4]; 2] {
    let row = |i: usize| std::array::from_fn(|c| u[i][0] * rows[0][c] + u[i][1] * rows[1][c]);
    [row(0), row(1)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn classification_survives_unimodular_row_moves(rows in block_rows(), u in unimodular(), mode in mode()) {
        prop_assert_eq!(u[0][0] * u[1][1] - u[0][1] * u[1][0], 1);
        let before = classify_block(&CuspBlock::new(rows, mode)).unwrap();
        let moved = apply(u, rows);
        let after = classify_block(&CuspBlock::new(moved, mode)).unwrap();
        prop_assert_eq!(before.tag(), after.tag());
        if let (BlockForm::Proportional(a), BlockForm::Proportional(b)) = (&before, &after) {
            prop_assert_eq!(a, b);
        }
        prop_assert_eq!(tau_block_rank(&CuspBlock::new(rows, mode)), tau_block_rank(&CuspBlock::new(moved, mode)));
    }
}

#[test]
fn exhaustive_sweeps_at_bound_one() {
    for mode in [TauMode::OneTau, TauMode::TwoTau] {
        let r = exhaustive_lemma_sweep(1, mode).unwrap();
        assert_eq!(r.violations, 0, "{mode}: {:?}", r.examples);
    }
}

#[test]
fn same_and_negated_pair_are_exclusive() {
    let pairs = coprime_pairs(6);
    for &pq in &pairs {
        for &pq2 in &pairs {
            // Both verdicts would need (p, q) = (p', q') = -(p', q'), i.e. (0, 0).
            assert!(!(pq == pq2 && pq == (-pq2.0, -pq2.1)), "{pq:?}");
        }
    }
    let same = CuspBlock::new([[1, 0, -1, 0], [0, 1, 0, -1]], TauMode::OneTau);
    let negated = CuspBlock::new([[1, 0, 1, 0], [0, 1, 0, 1]], TauMode::OneTau);
    assert_eq!(
        dehn_pair_verdict(&same, (1, 0), (1, 0)),
        Ok(PairVerdict::SamePair)
    );
    assert_eq!(
        dehn_pair_verdict(&negated, (1, 0), (-1, 0)),
        Ok(PairVerdict::NegatedPair)
    );
    assert!(dehn_pair_verdict(&negated, (1, 0), (1, 0)).is_err());
    assert!(dehn_pair_verdict(&same, (1, 0), (-1, 0)).is_err());
}
