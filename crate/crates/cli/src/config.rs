use std::fmt;
use std::str::FromStr;

use nregular_core::basis::HalfInt;
use serde::Serialize;

pub const MAX_N: usize = 4;
/// Cost guard on `l_max`, lifted by `--allow-large`.
pub const LMAX_GUARD: HalfInt = HalfInt(5);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Tensor,
    Diffops,
    Basis,
    Kernel,
    Pairing,
    Reproduce,
    Lie,
    Ktypes,
    Unitary,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Algebra,
        Suite::Tensor,
        Suite::Diffops,
        Suite::Basis,
        Suite::Kernel,
        Suite::Pairing,
        Suite::Reproduce,
        Suite::Lie,
        Suite::Ktypes,
        Suite::Unitary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Tensor => "tensor",
            Suite::Diffops => "diffops",
            Suite::Basis => "basis",
            Suite::Kernel => "kernel",
            Suite::Pairing => "pairing",
            Suite::Reproduce => "reproduce",
            Suite::Lie => "lie",
            Suite::Ktypes => "ktypes",
            Suite::Unitary => "unitary",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
                format!("unknown suite {s:?} (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub suites: Vec<Suite>,
    pub n: Vec<usize>,
    #[serde(serialize_with = "half_int_str")]
    pub l_max: HalfInt,
    pub seed: u64,
}

fn half_int_str<S: serde::Serializer>(h: &HalfInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&h.to_string())
}

impl SuiteConfig {
    pub fn new(
        mut suites: Vec<Suite>,
        mut n: Vec<usize>,
        l_max: HalfInt,
        seed: u64,
        allow_large: bool,
    ) -> Result<Self, String> {
        if suites.is_empty() {
            return Err("no suites selected".into());
        }
        if n.is_empty() {
            return Err("empty n range".into());
        }
        if let Some(bad) = n.iter().find(|&&k| !(1..=MAX_N).contains(&k)) {
            return Err(format!(
                "n = {bad} is outside the supported range 1..{MAX_N}"
            ));
        }
        if l_max.twice() < 0 {
            return Err(format!("l_max = {l_max} is negative"));
        }
        if l_max > LMAX_GUARD && !allow_large {
            return Err(format!(
                "l_max = {l_max} exceeds the default limit {LMAX_GUARD}; pass --allow-large to run it"
            ));
        }
        suites.sort();
        suites.dedup();
        n.sort();
        n.dedup();
        Ok(Self {
            suites,
            n,
            l_max,
            seed,
        })
    }
}

/// `1,2,4` or `1-3`, or a mix.
pub fn parse_n_range(s: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid n value {t:?}"))
        };
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(format!("empty n range {part:?}"));
                }
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    Ok(out)
}

pub fn parse_half_int(s: &str) -> Result<HalfInt, String> {
    s.parse::<HalfInt>().map_err(|e| e.to_string())
}
