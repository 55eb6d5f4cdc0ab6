//! Inputs shared by the benchmarks.

use avoidstat::{PatternPair, Permutation};

/// Patterns timed by the counting benches, from short to long.
pub fn patterns() -> Vec<Permutation> {
    ["213", "321", "2314", "341256", "645721389"].iter().map(|s| s.parse().expect("literal pattern")).collect()
}

/// A fixed pseudo-random permutation of length `n` (xorshift Fisher-Yates).
pub fn scrambled(n: usize) -> Permutation {
    let mut v: Vec<u32> = (1..=n as u32).collect();
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    for i in (1..n).rev() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        v.swap(i, (state % (i as u64 + 1)) as usize);
    }
    Permutation::new(v).expect("shuffle keeps a permutation")
}

/// Pairs timed by the bijection benches.
pub fn pairs() -> Vec<PatternPair> {
    let p = |s: &str| s.parse::<Permutation>().expect("literal pattern");
    vec![
        PatternPair::basic(),
        PatternPair::new(p("1"), p("1"), 2).expect("valid pair"),
        PatternPair::new(p("12"), p("12"), 2).expect("valid pair"),
    ]
}
