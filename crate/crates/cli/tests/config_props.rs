use std::collections::BTreeMap;

use proptest::prelude::*;
use psh_cli::cache::cache_key;
use psh_cli::config::{Overrides, KEYS};

fn settings() -> impl Strategy<Value = BTreeMap<String, String>> {
    proptest::collection::btree_map(
        proptest::sample::select(KEYS.to_vec()).prop_map(str::to_string),
        "[a-z0-9:.,+*-]{1,12}",
        0..KEYS.len(),
    )
}

proptest! {
    #[test]
    fn file_round_trip(values in settings()) {
        let text: String = values.iter().map(|(k, v)| format!("  {k} = {v}  # note\n\n")).collect();
        let parsed = Overrides::parse_file(&text).unwrap();
        prop_assert_eq!(parsed.values, values);
    }

    #[test]
    fn higher_layer_wins(hi in settings(), lo in settings()) {
        let merged = Overrides { values: hi.clone() }.over(Overrides { values: lo.clone() });
        for k in KEYS {
            let want = hi.get(k).or_else(|| lo.get(k));
            prop_assert_eq!(merged.values.get(k), want);
        }
    }

    #[test]
    fn cache_keys_separate_operation_and_params(op in "[a-z]{1,8}", a in ".{0,24}", b in ".{0,24}") {
        let k = cache_key(&op, &a);
        prop_assert_eq!(k.len(), 64);
        prop_assert_eq!(&k, &cache_key(&op, &a));
        if a != b {
            prop_assert_ne!(k, cache_key(&op, &b));
        }
    }
}
