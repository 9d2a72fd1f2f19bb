//! Arbitrary input never panics and always maps to a documented exit code.

use proptest::prelude::*;

fn run(args: &[&str], input: &[u8]) -> i32 {
    let mut args_full = vec!["qil"];
    args_full.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    qil_cli::run(args_full, &mut &input[..], &mut out, &mut err)
}

/// Mostly well-formed documents; one in four has a wrong entry count.
fn document() -> impl Strategy<Value = String> {
    (1usize..5, any::<bool>(), 0u8..4)
        .prop_flat_map(|(dim, margin, skew)| {
            let len = if skew == 0 { dim * dim + 1 } else { dim * dim };
            (Just(dim), Just(margin), prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), len))
        })
        .prop_map(|(dim, margin, entries)| {
            let e: Vec<String> = entries.iter().map(|(a, b)| format!("[{a},{b}]")).collect();
            let margin = if margin { ",\"interior_margin\":1" } else { "" };
            format!("{{\"dim\":{dim},\"entries\":[{}]{margin}}}", e.join(","))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn random_bytes(input in prop::collection::vec(any::<u8>(), 0..64)) {
        prop_assert_eq!(run(&["classify"], &input), 2);
    }

    #[test]
    fn random_documents(doc in document(), m in 1usize..4, n in 0usize..3) {
        let (m, n) = (m.to_string(), n.to_string());
        for args in [
            vec!["classify", "--m-max", m.as_str(), "--n-max", n.as_str()],
            vec!["decompose", "-m", m.as_str(), "-n", n.as_str()],
        ] {
            let code = run(&args, doc.as_bytes());
            prop_assert!((0..=2).contains(&code), "{:?} -> {}", args, code);
        }
    }
}
