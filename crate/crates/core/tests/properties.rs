use std::collections::HashSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use perfect_partition::construct::l82::{build_type1, Type1Builder};
use perfect_partition::construct::{build_l61, knn_partition};
use perfect_partition::counting::forbidden_rook_polynomial;
use perfect_partition::search::find_factorizations;
use perfect_partition::verify::check_factorization;
use perfect_partition::{
    check_partition, count_matchings, enumerate, find_perfect_partition, GraphSpec, LParams,
    MatchingSet, PartitionCertificate, Permutation, SearchOptions, SearchOutcome,
};
use proptest::prelude::*;

fn l61_cert() -> &'static PartitionCertificate {
    static CERT: OnceLock<PartitionCertificate> = OnceLock::new();
    CERT.get_or_init(|| perfect_partition::construct::l61::build_l61_default().certificate())
}

fn type1() -> &'static (Type1Builder, Vec<Vec<Permutation>>) {
    static T: OnceLock<(Type1Builder, Vec<Vec<Permutation>>)> = OnceLock::new();
    T.get_or_init(|| (Type1Builder::load().unwrap(), build_type1().unwrap()))
}

fn matchings(spec: &GraphSpec) -> MatchingSet {
    enumerate(spec).unwrap()
}

/// Sum of permutation matrices equals the adjacency matrix.
fn matrix_sum_oracle(spec: &GraphSpec, perms: &[Permutation]) -> bool {
    let a = spec.adjacency();
    let n = spec.n();
    let mut sum = vec![vec![0usize; n]; n];
    for p in perms {
        for (i, row) in sum.iter_mut().enumerate() {
            row[p.apply(i + 1) - 1] += 1;
        }
    }
    (0..n).all(|i| (0..n).all(|j| sum[i][j] == usize::from(a.get(i + 1, j + 1))))
}

fn small_l() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=4, 1usize..=6).prop_filter("at most 12 vertices a side", |(r, m)| r * m <= 12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rook_polynomial_shape((r, m) in small_l()) {
        let a = forbidden_rook_polynomial::<BigInt>(&LParams::new(r, m).unwrap());
        prop_assert_eq!(a.degree(), Some(r * m));
        prop_assert_eq!(a.coeff(0), BigInt::from(1));
        prop_assert_eq!(a.coeff(1), BigInt::from(m * r * r));
        prop_assert!(a.coeffs().iter().all(|c| *c > BigInt::from(0)));
    }

    #[test]
    fn l_graphs_are_regular((r, m) in small_l()) {
        let spec = GraphSpec::l(r, m).unwrap();
        let a = spec.adjacency();
        let n = r * m;
        prop_assert!(a.row_sums().iter().chain(&a.col_sums()).all(|&d| d == n - r));
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(a.get(i + 1, j + 1), i / r != j / r);
            }
        }
    }

    /// Factorizations with one member possibly replaced, and random sets:
    /// the verifier accepts exactly those whose matrices sum to the
    /// adjacency matrix.
    #[test]
    fn factorization_iff_matrix_sum(
        graph in 0usize..4,
        start in any::<prop::sample::Index>(),
        replace in proptest::option::of((any::<prop::sample::Index>(), any::<prop::sample::Index>())),
        random in proptest::collection::vec(any::<prop::sample::Index>(), 1..6),
    ) {
        let spec = [GraphSpec::l(1, 4), GraphSpec::l(1, 5), GraphSpec::l(2, 2), GraphSpec::complete(3)][graph].clone().unwrap();
        let ms = matchings(&spec);
        let seed = &ms.perms()[start.index(ms.len())];
        let mut perms = find_factorizations(&spec, Some(seed)).unwrap().remove(0);
        if let Some((slot, with)) = replace {
            let k = slot.index(perms.len());
            perms[k] = ms.perms()[with.index(ms.len())].clone();
        }
        prop_assert_eq!(check_factorization(&spec, &perms).is_ok(), matrix_sum_oracle(&spec, &perms));
        let perms: Vec<Permutation> = random.iter().map(|i| ms.perms()[i.index(ms.len())].clone()).collect();
        prop_assert_eq!(check_factorization(&spec, &perms).is_ok(), matrix_sum_oracle(&spec, &perms));
    }

    #[test]
    fn certificate_json_round_trip(keep in proptest::collection::vec(any::<bool>(), 53)) {
        let cert = l61_cert();
        let parts: Vec<Vec<Permutation>> = cert.parts().iter().zip(&keep).filter(|(_, k)| **k).map(|(p, _)| p.clone()).collect();
        let complete = keep.iter().all(|k| *k);
        let sub = PartitionCertificate::new(cert.spec().clone(), parts, complete);
        let json = sub.to_json();
        let back = PartitionCertificate::from_json(&json).unwrap();
        prop_assert_eq!(back.to_json(), json);
        prop_assert_eq!(back.parts(), sub.parts());
        let rep = check_partition(&back).unwrap();
        // any subset of a perfect partition is a valid partial one
        prop_assert!(rep.is_ok(), "{}", rep);
    }

    #[test]
    fn shuffled_parts_give_identical_certificates(seed in any::<u64>()) {
        let cert = l61_cert();
        let mut parts = cert.parts().to_vec();
        let mut x = seed | 1;
        for i in (1..parts.len()).rev() {
            x ^= x << 13; x ^= x >> 7; x ^= x << 17;
            parts.swap(i, (x % (i as u64 + 1)) as usize);
            let len = parts[i].len();
            parts[i].rotate_left((x as usize) % len);
        }
        let again = PartitionCertificate::new(cert.spec().clone(), parts, true);
        prop_assert_eq!(again.to_json(), cert.to_json());
    }

    #[test]
    fn type1_parts_rebuild_from_their_pair(index in 0usize..384, swap in any::<bool>()) {
        let (builder, parts) = type1();
        let part = &parts[index];
        let (a, b) = if swap { (&part[1], &part[0]) } else { (&part[0], &part[1]) };
        let rebuilt = builder.rebuild(a, b).unwrap();
        prop_assert_eq!(&rebuilt[..], &part[..]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn l61_zone_members_are_distinct_c33_pairs(choice in 0usize..200) {
        let seeds = perfect_partition::construct::l61::all_seeds();
        let (seed, pattern) = &seeds[choice % seeds.len()];
        let y0 = 2 + choice / seeds.len();
        let c = build_l61(y0, seed, pattern).unwrap();
        for y in (2..=6).filter(|&y| y != y0) {
            let zone = c.zone(y).unwrap();
            let members: HashSet<&Permutation> = zone.members().collect();
            prop_assert_eq!(members.len(), 20);
            for s in zone.subsets() {
                prop_assert!(check_factorization(&GraphSpec::l(1, 6).unwrap(), s.members()).is_ok());
                prop_assert_eq!(s.members()[1].clone(), s.members()[0].inverse());
            }
        }
    }
}

#[test]
fn knn_cosets_are_disjoint_and_exhaustive() {
    for n in 1..=6 {
        let cert = knn_partition(n).unwrap();
        let spec = GraphSpec::complete(n).unwrap();
        let mut seen = HashSet::new();
        for part in cert.parts() {
            assert!(matrix_sum_oracle(&spec, part));
            for p in part {
                assert!(seen.insert(p.clone()), "K({n},{n}): {p} twice");
            }
        }
        assert_eq!(seen.len(), (1..=n).product::<usize>());
    }
}

#[test]
fn complete_certificates_satisfy_count_identity() {
    for (r, m) in [(1, 2), (1, 4), (1, 5), (2, 2), (2, 3), (3, 2)] {
        let spec = GraphSpec::l(r, m).unwrap();
        let SearchOutcome::Found(certs) =
            find_perfect_partition(&spec, SearchOptions::default()).unwrap()
        else {
            panic!("{}: no partition", spec.label());
        };
        let cert = &certs[0];
        let rep = check_partition(cert).unwrap();
        assert!(rep.is_ok(), "{rep}");
        let count: BigInt = count_matchings(&LParams::new(r, m).unwrap());
        assert_eq!(BigInt::from(cert.degree() * cert.parts().len()), count);
        for part in cert.parts() {
            assert!(matrix_sum_oracle(&spec, part));
        }
    }
}

#[test]
fn search_budget_is_never_reported_as_none() {
    let spec = GraphSpec::l(2, 3).unwrap();
    let options = SearchOptions {
        budget: Some(1),
        ..SearchOptions::default()
    };
    let outcome = find_perfect_partition(&spec, options).unwrap();
    assert!(
        matches!(outcome, SearchOutcome::BudgetExceeded { .. }),
        "{outcome:?}"
    );
}
