use ncf_kit::field::IntervalSet;
use ncf_kit::functions::table_size;
use ncf_kit::{detect, NcfDescriptor, PolyR, PrimeField, TruthTable};
use proptest::prelude::*;

const PRIMES: [u64; 7] = [2, 3, 5, 7, 11, 13, 97];

fn prime() -> impl Strategy<Value = PrimeField> {
    prop::sample::select(PRIMES.to_vec()).prop_map(|p| PrimeField::new(p).unwrap())
}

fn table(max_size: usize) -> impl Strategy<Value = TruthTable> {
    (prop::sample::select(vec![2u64, 3, 5]), 1usize..=3)
        .prop_filter("table too large", move |&(p, n)| (p as usize).pow(n as u32) <= max_size)
        .prop_flat_map(|(p, n)| {
            let f = PrimeField::new(p).unwrap();
            prop::collection::vec(0..f.p(), table_size(f, n)).prop_map(move |v| TruthTable::new(f, n, v).unwrap())
        })
}

fn descriptor() -> impl Strategy<Value = NcfDescriptor> {
    (prop::sample::select(vec![2u64, 3, 5]), 1usize..=3).prop_flat_map(|(p, n)| {
        let f = PrimeField::new(p).unwrap();
        let catalog = f.interval_sets();
        (
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            prop::collection::vec(prop::sample::select(catalog), n),
            prop::collection::vec(0..f.p(), n),
            1..f.p(),
        )
            .prop_map(move |(sigma, sets, mut b, step)| {
                let last = f.add(b[n - 1], step);
                b.push(last);
                NcfDescriptor::new(f, sigma, sets, b).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn field_axioms(f in prime(), a in 0u8..97, b in 0u8..97, c in 0u8..97) {
        let (a, b, c) = (a % f.p(), b % f.p(), c % f.p());
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.pow(a, f.p() as u64), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn interval_membership_matches_expansion(f in prime(), i in 0usize..192, x in 0u8..97) {
        let sets = f.interval_sets();
        let s = sets[i % sets.len()];
        let x = x % f.p();
        prop_assert_eq!(s.contains(x), s.members(f).contains(&x));
        prop_assert_eq!(s.complement(f).contains(x), !s.contains(x));
        prop_assert_eq!(s.to_string().parse::<IntervalSet>().unwrap(), s);
    }

    #[test]
    fn interpolate_inverts_evaluation(t in table(27)) {
        prop_assert_eq!(PolyR::interpolate(&t).to_table(), t);
    }

    #[test]
    fn table_text_and_json_round_trip(t in table(125)) {
        prop_assert_eq!(TruthTable::parse_text(&t.to_text()).unwrap(), t.clone());
        prop_assert_eq!(TruthTable::parse_any(&t.to_json().to_string()).unwrap(), t);
    }

    #[test]
    fn polynomial_text_and_json_round_trip(t in table(27)) {
        let poly = PolyR::interpolate(&t);
        prop_assert_eq!(PolyR::parse_text(&poly.to_text()).unwrap(), poly.clone());
        prop_assert_eq!(PolyR::from_json(&poly.to_json().to_string()).unwrap(), poly);
    }

    #[test]
    fn detection_witness_rebuilds_table(t in table(27)) {
        if let Some(d) = detect(&t).descriptor() {
            prop_assert_eq!(d.build_table().unwrap(), t);
        }
    }

    #[test]
    fn descriptor_round_trips(d in descriptor()) {
        prop_assert_eq!(NcfDescriptor::parse(d.field(), &d.to_string()).unwrap(), d.clone());
        prop_assert_eq!(NcfDescriptor::from_json(&d.to_json().to_string()).unwrap(), d.clone());
        let t = d.build_table().unwrap();
        prop_assert!(detect(&t).is_ncf());
        prop_assert_eq!(d.build_polynomial().unwrap().to_table(), t.clone());
        prop_assert_eq!(d.complement_last().build_table().unwrap(), t);
    }
}
