use nagata_core::dsl::expr::parse_expr;
use nagata_core::dsl::{parse, run, RunOptions};
use proptest::prelude::*;

fn expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (0u32..30).prop_map(|n| n.to_string()),
        prop::sample::select(vec!["x", "y", "Z"]).prop_map(str::to_string),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), prop::sample::select(vec!["+", "-", "*"]), inner.clone())
                .prop_map(|(a, op, b)| format!("{a} {op} {b}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            (inner.clone(), 0u32..4).prop_map(|(a, e)| format!("({a})^{e}")),
            inner.clone().prop_map(|a| format!("-({a})")),
            inner.prop_map(|a| format!("({a})/x")),
        ]
    })
}

fn header() -> impl Strategy<Value = String> {
    (
        prop::sample::select(vec!["F5", "F7", "Q"]),
        12usize..30,
        1u32..3,
        -3i64..2,
        prop::sample::select(vec![" ", "   ", "\t"]),
        any::<bool>(),
    )
        .prop_map(|(field, precision, step, threshold, pad, comment)| {
            let note = if comment { "  # note" } else { "" };
            format!(
                "field {field}\nprecision{pad}{precision}{note}\nseries z = liouville({step})\n\
                 ring A0 = poly(x, y)\nring A = localize(A0, at=(x, y))\nring S = adjoin(A, Z -> z)\n\
                 derivation D on S over A : Z = 1\nset C = powers(x)\n\
                 module K = lattice(val >= {threshold})\nscenario G = twist(S, D, K, C)\n"
            )
        })
}

fn check() -> impl Strategy<Value = String> {
    prop_oneof![
        expr().prop_map(|e| format!("check membership G : {e}")),
        (1u32..20).prop_map(|n| format!("check closure G : samples={n}")),
        (expr(), expr()).prop_map(|(a, b)| format!("check quadratic G : pairs=[({a}, {b})]")),
        (1u32..4).prop_map(|m| format!("check analytic-iso G : m={m}")),
        (expr(), 1u32..3).prop_map(|(e, m)| format!("check one-case G : ideal=(x, {e}), m={m}")),
        (-3i64..0).prop_map(|t| format!("check correspondence G : threshold={t}, samples=3")),
    ]
}

fn script() -> impl Strategy<Value = String> {
    (header(), prop::collection::vec(check(), 0..5))
        .prop_map(|(h, checks)| h + &checks.join("\n") + "\n")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn printing_expressions_round_trips(text in expr()) {
        let e = parse_expr(&text).unwrap();
        prop_assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn printing_scripts_round_trips(text in script()) {
        let ast = parse(&text).unwrap();
        let printed = ast.to_string();
        let again = parse(&printed).unwrap();
        prop_assert_eq!(&again, &ast);
        prop_assert_eq!(again.to_string(), printed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn runs_are_deterministic(text in script(), seed in any::<u64>()) {
        let ast = parse(&text).unwrap();
        let options = RunOptions {
            seed,
            timing: false,
            ..RunOptions::default()
        };
        let first = run(&ast, &options).to_json();
        prop_assert_eq!(run(&ast, &options).to_json(), first.clone());
        let reparsed = parse(&ast.to_string()).unwrap();
        let second: serde_json::Value = serde_json::from_str(&run(&reparsed, &options).to_json()).unwrap();
        let first: serde_json::Value = serde_json::from_str(&first).unwrap();
        for (a, b) in first["commands"].as_array().unwrap().iter().zip(second["commands"].as_array().unwrap()) {
            prop_assert_eq!(&a["verdict"], &b["verdict"]);
            prop_assert_eq!(&a["summary"], &b["summary"]);
        }
    }
}
