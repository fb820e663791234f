use proptest::prelude::*;

use wadge_core::families::embeddable_corpus;
use wadge_core::game::{judge_rounds, GameState, Player};
use wadge_core::io::{poset_from_json, poset_to_json, to_dot};
use wadge_core::poset::closure;
use wadge_core::scott::alternation_rank_sparse;
use wadge_core::*;

fn exhaustive() -> SearchOptions {
    SearchOptions {
        budget: None,
        ..SearchOptions::default()
    }
}

/// A random poset on `0..n` whose order refines the index order.
fn poset(max_n: usize) -> impl Strategy<Value = ColoredPoset> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (
                Just(n),
                proptest::collection::vec(prop::bool::weighted(0.35), pairs),
                proptest::collection::vec(0u8..2, n),
            )
        })
        .prop_map(|(n, edges, colors)| {
            let all = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
            let pairs: Vec<_> = all.zip(edges).filter(|&(_, e)| e).map(|(p, _)| p).collect();
            ColoredPoset::from_relation(n, &pairs, &colors, None).unwrap()
        })
}

/// A random poset with a least element 0.
fn rooted(max_n: usize) -> impl Strategy<Value = ColoredPoset> {
    poset(max_n).prop_map(|p| {
        let n = p.len() + 1;
        let mut pairs: Vec<_> = p
            .hasse_edges()
            .into_iter()
            .map(|(a, b)| (a + 1, b + 1))
            .collect();
        pairs.extend((1..n).map(|j| (0, j)));
        let mut colors = vec![0];
        colors.extend_from_slice(p.colors());
        ColoredPoset::from_relation(n, &pairs, &colors, Some(0)).unwrap()
    })
}

fn corpus() -> Vec<ColoredPoset> {
    let mut out = embeddable_corpus(4).unwrap();
    for n in 1..=2 {
        for m in 1..=2 {
            out.push(gen_p(n, m).unwrap());
            out.push(gen_q(n, m).unwrap());
        }
    }
    out
}

fn embeddable() -> impl Strategy<Value = ColoredPoset> {
    let c = corpus();
    (0..c.len()).prop_map(move |i| c[i].clone())
}

fn small_embeddable() -> impl Strategy<Value = ColoredPoset> {
    let c: Vec<_> = corpus().into_iter().filter(|p| p.len() <= 8).collect();
    (0..c.len()).prop_map(move |i| c[i].clone())
}

fn family(max_u: usize) -> impl Strategy<Value = SetFamily> {
    (1..=max_u).prop_flat_map(|u| {
        proptest::collection::vec(0u64..1 << u, 0..6)
            .prop_map(move |ms| SetFamily::new(u, ms.into_iter().map(FinSet::from_mask)).unwrap())
    })
}

/// Order- and color-preserving check written out directly.
fn is_hom(p: &ColoredPoset, q: &ColoredPoset, map: &[usize], mode: Mode) -> bool {
    let n = p.len();
    let base = (0..n).all(|a| p.color(a) == q.color(map[a]))
        && (0..n).all(|a| (0..n).all(|b| !p.leq(a, b) || q.leq(map[a], map[b])));
    let injective = (0..n).all(|a| (a + 1..n).all(|b| map[a] != map[b]));
    let covers = (0..n).all(|b| {
        p.imm_preds(b).iter().all(|a| {
            q.lt(map[a], map[b]) && !(0..q.len()).any(|r| q.lt(map[a], r) && q.lt(r, map[b]))
        })
    });
    match mode {
        Mode::Plain => base,
        Mode::Injective => base && injective,
        Mode::ImmPred => base && injective && covers,
    }
}

fn brute_force_hom(p: &ColoredPoset, q: &ColoredPoset, mode: Mode) -> bool {
    let mut map = vec![0; p.len()];
    loop {
        if is_hom(p, q, &map, mode) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == map.len() {
                return false;
            }
            map[i] += 1;
            if map[i] < q.len() {
                break;
            }
            map[i] = 0;
            i += 1;
        }
    }
}

/// Longest alternating chain upwards (or downwards) from `a`, by recursion.
fn chain_len(p: &ColoredPoset, a: usize, up: bool) -> usize {
    1 + (0..p.len())
        .filter(|&b| p.color(b) != p.color(a) && if up { p.lt(a, b) } else { p.lt(b, a) })
        .map(|b| chain_len(p, b, up))
        .max()
        .unwrap_or(0)
}

fn rank_by_enumeration(a: &SetFamily) -> i64 {
    let u = a.universe();
    let member = |m: u64| a.contains(&FinSet::from_mask(m));
    fn longest(f: u64, full: u64, member: &dyn Fn(u64) -> bool) -> i64 {
        let rest = full & !f;
        let mut best = 0;
        let mut extra = rest;
        while extra != 0 {
            let g = f | extra;
            if member(g) != member(f) {
                best = best.max(1 + longest(g, full, member));
            }
            extra = (extra - 1) & rest;
        }
        best
    }
    let full = (1u64 << u) - 1;
    (0..=full)
        .filter(|&m| member(m))
        .map(|m| longest(m, full, &member))
        .max()
        .unwrap_or(-1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closure_is_idempotent(p in poset(9)) {
        let again = closure(p.len(), &p.generating_pairs());
        for (i, row) in again.iter().enumerate() {
            prop_assert_eq!(row, p.up_set(i));
        }
        let rebuilt = ColoredPoset::from_relation(p.len(), &p.hasse_edges(), p.colors(), None).unwrap();
        prop_assert_eq!(rebuilt, p);
    }

    #[test]
    fn immediate_predecessors_are_covers(p in poset(9)) {
        let n = p.len();
        for b in 0..n {
            for a in 0..n {
                let covers = p.lt(a, b) && !(0..n).any(|r| p.lt(a, r) && p.lt(r, b));
                prop_assert_eq!(p.imm_preds(b).contains(a), covers);
                prop_assert_eq!(p.imm_succs(a).contains(b), covers);
            }
        }
    }

    #[test]
    fn supremum_is_least_upper_bound(p in poset(8), mask in 0u64..256) {
        let s: FinSet = FinSet::from_mask(mask).iter().filter(|&i| i < p.len()).collect();
        let ubs: Vec<usize> = (0..p.len()).filter(|&u| s.iter().all(|x| p.leq(x, u))).collect();
        let least = ubs.iter().copied().find(|&u| ubs.iter().all(|&v| p.leq(u, v)));
        prop_assert_eq!(p.supremum(&s).unwrap(), least);
    }

    #[test]
    fn pairwise_bounded_completeness_matches_exhaustive(p in poset(8)) {
        prop_assert_eq!(p.is_bounded_complete(), p.bounded_completeness_exhaustive().unwrap().is_none());
    }

    #[test]
    fn strengths_match_chain_enumeration(p in poset(10)) {
        let s = Strengths::compute(&p);
        for a in 0..p.len() {
            prop_assert_eq!(s.incr[a], chain_len(&p, a, true));
            prop_assert_eq!(s.decr[a], chain_len(&p, a, false));
        }
    }

    #[test]
    fn search_matches_brute_force(p in poset(5), q in poset(6)) {
        for mode in [Mode::Plain, Mode::Injective, Mode::ImmPred] {
            let expected = brute_force_hom(&p, &q, mode);
            for strength_pruning in [true, false] {
                let opts = SearchOptions { strength_pruning, ..exhaustive() };
                let out = find_hom(&p, &q, mode, &opts).unwrap();
                prop_assert_eq!(out.is_found(), expected, "mode {} pruning {}", mode, strength_pruning);
                if let Some(h) = out.hom() {
                    prop_assert!(is_hom(&p, &q, &h.map, mode));
                    prop_assert!(verify_hom(&p, &q, h).ok);
                }
            }
        }
    }

    #[test]
    fn parallel_search_agrees(p in poset(6), q in poset(7)) {
        let serial = find_hom(&p, &q, Mode::Plain, &exhaustive()).unwrap().is_found();
        let opts = SearchOptions { threads: 3, ..exhaustive() };
        let parallel = find_hom(&p, &q, Mode::Plain, &opts).unwrap();
        prop_assert_eq!(parallel.is_found(), serial);
        if let Some(h) = parallel.hom() {
            prop_assert!(verify_hom(&p, &q, h).ok);
        }
    }

    #[test]
    fn homomorphisms_compose(p in poset(6), q in poset(6), r in poset(6)) {
        let f = find_hom(&p, &q, Mode::Plain, &exhaustive()).unwrap();
        let g = find_hom(&q, &r, Mode::Plain, &exhaustive()).unwrap();
        if let (Some(f), Some(g)) = (f.hom(), g.hom()) {
            prop_assert!(verify_hom(&p, &r, &f.then(g)).ok);
        }
    }

    #[test]
    fn search_is_invariant_under_relabeling(p in poset(6), q in poset(6), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..q.len()).collect();
        let mut x = seed;
        for i in (1..perm.len()).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (x >> 33) as usize % (i + 1));
        }
        let q2 = q.permuted(&perm).unwrap();
        let a = find_hom(&p, &q, Mode::Plain, &exhaustive()).unwrap().is_found();
        let b = find_hom(&p, &q2, Mode::Plain, &exhaustive()).unwrap().is_found();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn down_sets_are_ideals_and_map_in(p in rooted(7), top in 0usize..8) {
        let top = top % p.len();
        let keep: Vec<usize> = p.down_set(top).iter().collect();
        let pairs: Vec<(usize, usize)> = p
            .hasse_edges()
            .into_iter()
            .filter_map(|(a, b)| Some((keep.iter().position(|&k| k == a)?, keep.iter().position(|&k| k == b)?)))
            .collect();
        let colors: Vec<u8> = keep.iter().map(|&k| p.color(k)).collect();
        let sub = ColoredPoset::from_relation(keep.len(), &pairs, &colors, None).unwrap();
        prop_assert!(sub.is_ideal_of(&p, &keep).unwrap());
        let inclusion = Homomorphism { mode: Mode::Plain, map: keep };
        prop_assert!(verify_hom(&sub, &p, &inclusion).ok);
    }

    #[test]
    fn strengths_do_not_drop_along_homomorphisms(p in poset(6), q in poset(7)) {
        if let Some(h) = find_hom(&p, &q, Mode::Plain, &exhaustive()).unwrap().hom() {
            let (sp, sq) = (Strengths::compute(&p), Strengths::compute(&q));
            for a in 0..p.len() {
                prop_assert!(sq.incr[h.map[a]] >= sp.incr[a]);
                prop_assert!(sq.decr[h.map[a]] >= sp.decr[a]);
            }
        }
    }

    #[test]
    fn rank_matches_enumeration(a in family(8)) {
        let dp = alternation_rank(&a).unwrap();
        prop_assert_eq!(dp, rank_by_enumeration(&a));
        prop_assert_eq!(alternation_rank_sparse(&a), dp);
    }

    #[test]
    fn closure_cache_does_not_change_membership(a in family(6), mask in 0u64..64) {
        let f = FinSet::from_mask(mask & ((1 << a.universe()) - 1));
        let cached = a.clone().with_closure_cache();
        let direct = a.members().iter().any(|m| f.is_subset(m));
        prop_assert_eq!(cached.in_closure(&f), direct);
        prop_assert_eq!(a.in_closure(&f), direct);
    }

    #[test]
    fn labels_characterize_membership(p in embeddable()) {
        let lab = label(&p).unwrap();
        prop_assert!(lab.is_injective());
        prop_assert!(lab.is_monotone(&p));
        let a = build_a(&p).unwrap();
        for i in 0..p.len() {
            prop_assert!(lab.get(i).is_subset(&FinSet::full(p.len())));
        }
        for mask in 0u64..1 << p.len() {
            let f = FinSet::from_mask(mask);
            if !a.in_closure(&f) && !(0..p.len()).any(|i| f.is_subset(lab.get(i))) {
                continue;
            }
            let s = sup_label(&p, &lab, &f).unwrap();
            prop_assert_eq!(a.contains(&f), p.color(s) == 1 && lab.get(s) == &f);
        }
    }

    #[test]
    fn reductions_follow_homomorphisms(p in small_embeddable(), q in embeddable()) {
        if let Some(h) = find_hom(&p, &q, Mode::Plain, &exhaustive()).unwrap().hom() {
            let f = build_reduction(&p, &q, h).unwrap();
            prop_assert!(verify_reduction(&p, &q, &f).unwrap().ok);
            let back = extract_hom(&p, &q, &f).unwrap();
            prop_assert!(verify_hom(&p, &q, &back).ok);
            let again = MonotoneMap::from_json(f.to_json()).unwrap();
            prop_assert_eq!(again, f);
        }
    }

    #[test]
    fn judge_ignores_round_order(p in poset(5), q in poset(5), moves in proptest::collection::vec((0usize..5, 0usize..5), 1..6), rot in 0usize..6) {
        let rounds: Vec<(usize, usize)> = moves.into_iter().map(|(a, b)| (a % p.len(), b % q.len())).collect();
        let mut rotated = rounds.clone();
        rotated.rotate_left(rot % rounds.len());
        rotated.reverse();
        prop_assert_eq!(judge_rounds(&p, &q, &rounds), judge_rounds(&p, &q, &rotated));
        let mut s = GameState::new(&p, &q);
        for &(a, b) in &rounds {
            s = s.move_i(a).unwrap().move_ii(b).unwrap();
        }
        let s = s.pass_i().unwrap();
        let replayed = s.to_record().replay(&p, &q).unwrap();
        prop_assert_eq!(replayed.rounds(), s.rounds());
        prop_assert_eq!(replayed.judge().unwrap(), s.judge().unwrap());
        let map_like = rounds.iter().all(|&(a, b)| rounds.iter().all(|&(c, d)| a != c || b == d));
        if map_like {
            let map: Vec<Option<usize>> = (0..p.len()).map(|a| rounds.iter().find(|r| r.0 == a).map(|r| r.1)).collect();
            let ok = rounds.iter().all(|&(a, b)| p.color(a) == q.color(b))
                && rounds.iter().all(|&(a, _)| rounds.iter().all(|&(c, _)| !p.leq(a, c) || q.leq(map[a].unwrap(), map[c].unwrap())));
            prop_assert_eq!(s.judge().unwrap() == Player::II, ok);
        }
    }

    #[test]
    fn json_round_trip(p in poset(9)) {
        let text = poset_to_json(&p).to_string();
        prop_assert_eq!(poset_from_json(&text).unwrap(), p);
    }

    #[test]
    fn dot_draws_the_hasse_diagram(p in poset(9)) {
        prop_assert_eq!(to_dot(&p).matches("->").count(), p.hasse_edges().len());
    }

    #[test]
    fn truncations_are_ideals_across_parameters(n in 1usize..4, extra in 1usize..3, m in 1usize..6) {
        let (small, big) = (gen_p(n + extra, m).unwrap(), gen_p(n, m).unwrap());
        let inc = small.inclusion_by_names(&big).unwrap();
        prop_assert!(small.is_ideal_of(&big, &inc).unwrap());
        prop_assert!(find_hom(&small, &big, Mode::Plain, &exhaustive()).unwrap().is_found());
        for q in [gen_q(n, m).unwrap(), gen_q(n + extra, m).unwrap(), big, small] {
            prop_assert!(is_embeddable(&q).holds);
        }
    }

    #[test]
    fn increasing_strength_formula(n in 1usize..5, m in 0usize..12) {
        let p = gen_p(n, m + 1).unwrap();
        let w = p.index_of(&format!("w:{m}")).unwrap();
        prop_assert_eq!(str_incr(&p, w).unwrap(), 2 * (m / n) + 3);
    }
}
