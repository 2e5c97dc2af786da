mod common;

use num_bigint::BigInt;
use proptest::prelude::*;

use common::{random_control_path, random_model, random_run, rng};
use vass_unbounded::io::{format_model, parse_model, ModelFile};
use vass_unbounded::model::{Configuration, PseudoConfiguration, PseudoRun, Run};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn runs_are_monotone(seed in any::<u64>(), shift in proptest::collection::vec(0i64..5, 3)) {
        let mut r = rng(seed);
        let (v, init) = random_model(&mut r);
        let path = random_run(&mut r, &v, &init, 12);
        let run = Run::new(&v, init.clone(), path.clone()).unwrap();
        let delta: Vec<BigInt> = shift[..v.dim()].iter().map(|&d| BigInt::from(d)).collect();
        let raised: Vec<BigInt> = init.values().iter().zip(&delta).map(|(x, d)| x + d).collect();
        let lifted = Run::new(&v, Configuration::new(init.state(), raised).unwrap(), path).unwrap();
        let a = run.configurations(&v).unwrap();
        let b = lifted.configurations(&v).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!(x.state(), y.state());
            for j in 0..v.dim() {
                prop_assert_eq!(&y.values()[j] - &x.values()[j], delta[j].clone());
            }
        }
    }

    #[test]
    fn replay_is_deterministic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (v, init) = random_model(&mut r);
        let path = random_control_path(&mut r, &v, init.state(), 10);
        let a = v.replay(&init.to_pseudo(), &path).unwrap();
        let b = v.replay(&init.to_pseudo(), &path).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn nonnegative_pseudo_runs_are_runs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (v, init) = random_model(&mut r);
        let path = random_control_path(&mut r, &v, init.state(), 10);
        let pseudo = PseudoRun::new(&v, init.to_pseudo(), path.clone()).unwrap();
        let configs = pseudo.configurations(&v).unwrap();
        let nonneg = configs.iter().all(PseudoConfiguration::is_nonnegative);
        prop_assert_eq!(pseudo.to_run(&v).is_ok(), nonneg);
        prop_assert_eq!(v.replay(&init.to_pseudo(), &path).unwrap().genuine, nonneg);
        if nonneg {
            let run = pseudo.to_run(&v).unwrap();
            let concrete = run.configurations(&v).unwrap();
            for (c, p) in concrete.iter().zip(&configs) {
                prop_assert_eq!(&c.to_pseudo(), p);
            }
        }
    }

    #[test]
    fn absmax_dominates_pic(seed in any::<u64>()) {
        let (v, _) = random_model(&mut rng(seed));
        let n = v.norms();
        prop_assert!(n.absmax >= n.pic);
    }

    #[test]
    fn model_text_round_trips(seed in any::<u64>(), with_init in any::<bool>()) {
        let (v, init) = random_model(&mut rng(seed));
        let m = ModelFile {
            vass: v,
            init: with_init.then_some(init),
            internal: None,
        };
        prop_assert_eq!(parse_model(&format_model(&m)).unwrap(), m);
    }
}
