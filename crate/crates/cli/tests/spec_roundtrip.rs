use openness_cli::spec::{Params, ProblemSpec, SuiteName, Task, TermSpec};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = String> {
    (-50i64..50, 1i64..20).prop_map(|(n, d)| if d == 1 { n.to_string() } else { format!("{n}/{d}") })
}

fn task() -> impl Strategy<Value = Task> {
    prop_oneof![
        Just(Task::Theta),
        Just(Task::Kernel),
        Just(Task::EffectiveP),
        Just(Task::Dk),
        Just(Task::Jm),
        Just(Task::Ode),
        Just(Task::Audit),
        Just(Task::VerifyAll),
    ]
}

fn params() -> impl Strategy<Value = Params> {
    (
        prop::option::of(prop::collection::vec(rational(), 0..4)),
        prop::option::of(prop::collection::vec(1.0f64..1e6, 0..3)),
        prop::option::of(prop::collection::vec(0.0f64..50.0, 0..5)),
        prop::option::of(0.01f64..1.0),
        prop::option::of(prop::collection::vec(1u32..100, 0..4)),
        prop::option::of(any::<u64>()),
        prop::option::of(1000usize..1_000_000),
        prop::option::of(prop_oneof![Just(SuiteName::Fast), Just(SuiteName::Full)]),
        prop::option::of(1u32..50),
    )
        .prop_map(|(t, ratio, r_grid, b0, delta, seed, samples, suite, m)| Params {
            t,
            ratio,
            r_grid,
            b0,
            b0_list: b0.map(|b| vec![b, b / 2.0]),
            delta,
            t0: b0.map(|b| b + 1.0),
            m,
            seed,
            samples,
            suite,
        })
}

fn spec() -> impl Strategy<Value = ProblemSpec> {
    (1usize..4).prop_flat_map(|n| {
        let term = (
            prop::collection::vec(0u32..6, n),
            rational(),
            rational(),
            prop::option::of(rational()),
        )
            .prop_map(|(alpha, re, im, radicand)| TermSpec {
                alpha,
                re,
                im,
                radicand,
            });
        (
            task(),
            prop::collection::vec(rational(), n),
            prop::collection::vec(term, 0..4),
            params(),
        )
            .prop_map(|(task, weight, f, params)| ProblemSpec {
                task,
                weight,
                f,
                params,
            })
    })
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(s in spec()) {
        let back = ProblemSpec::from_json(&s.to_json()).unwrap();
        prop_assert_eq!(back, s);
    }
}

#[test]
fn defaults_fill_coefficients() {
    let s = ProblemSpec::from_json(r#"{"task":"kernel","weight":["1"],"f":[{"alpha":[2]}]}"#).unwrap();
    assert_eq!(s.f[0].re, "1");
    assert_eq!(s.f[0].im, "0");
    assert!(s.problem().is_ok());
}
