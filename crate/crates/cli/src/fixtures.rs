//! Embedded fixture corpus. Files under `fixtures/` are compiled in so the
//! binary can replay them from any working directory.

macro_rules! fixture {
    ($name:literal) => {
        ($name, include_str!(concat!("../fixtures/", $name)))
    };
}

/// Model, map and expected-output files, keyed by file name.
pub const FILES: &[(&str, &str)] = &[
    fixture!("prop3.2-left.model"),
    fixture!("prop3.2-right.model"),
    fixture!("prop3.3-left.model"),
    fixture!("prop3.3-right.model"),
    fixture!("prop3.4-left.model"),
    fixture!("prop3.4-right.model"),
    fixture!("sec2-asym.model"),
    fixture!("kuhn.model"),
    fixture!("prop5.3-chain.model"),
    fixture!("prop5.3-loop.model"),
    fixture!("prop5.3.map"),
    fixture!("serialize-example.model"),
    fixture!("serialize-example.expected.model"),
    fixture!("refl-closure-cex.model"),
    fixture!("wdot4-cex.model"),
    fixture!("wdot5-cex.model"),
];

/// Proof scripts, keyed by file name.
pub const PROOFS: &[(&str, &str)] = &[
    fixture!("proofs/wMdot.proof"),
    fixture!("proofs/w4dot.proof"),
    fixture!("proofs/w5dot.proof"),
    fixture!("proofs/kplus-con.proof"),
    fixture!("proofs/tdot-mono.proof"),
];

/// Looks up an embedded file by path, file name, or file name without
/// extension: `fixtures/kuhn.model`, `kuhn.model` and `kuhn` all resolve.
pub fn lookup(arg: &str) -> Option<&'static str> {
    let base = arg.rsplit('/').next().unwrap_or(arg);
    FILES.iter().chain(PROOFS).find_map(|(name, text)| {
        let file = name.rsplit('/').next().unwrap_or(name);
        let stem = file.rsplit_once('.').map_or(file, |(s, _)| s);
        (file == base || stem == base).then_some(*text)
    })
}

/// Stems of the embedded proofs paired with their text.
pub fn proof_stems() -> impl Iterator<Item = (&'static str, &'static str)> {
    PROOFS.iter().map(|(name, text)| {
        let file = name.trim_start_matches("proofs/");
        (file.trim_end_matches(".proof"), *text)
    })
}
