//! Mechanical checks of the graph-theoretic claims over a corpus of groups.

mod corpus;
mod lemmas;
mod report;
mod suites;

use std::str::FromStr;

pub use corpus::{Corpus, CorpusData, CorpusEntry, GroupData, PRIME_LIMIT};
pub use lemmas::{verify_lemma_suite, Lemma, MAX_TRIVIAL_Q_SHARE};
pub use report::{CheckRecord, VerdictReport};
pub use suites::{
    derived_sylow_is_normal, describe, sym4_geodesic_templates, verify_cd_inequality, verify_construction,
    verify_diameter_bounds, verify_p2q, verify_sym4_geodesics, verify_totaldisc,
};

use crate::constructions::GroupSpec;
use crate::error::{Error, Result};

pub const DEFAULT_TRIALS: usize = 1000;
pub const DEFAULT_SEED: u64 = 7;
pub const P2Q_PRIMES: [u32; 3] = [3, 5, 7];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Totaldisc,
    Bounds,
    Lemmas,
    Sym4,
    Construction,
    Cd,
    P2q,
    All,
}

impl Suite {
    pub const INDIVIDUAL: [Suite; 7] = [
        Suite::Totaldisc,
        Suite::Bounds,
        Suite::Lemmas,
        Suite::Sym4,
        Suite::Construction,
        Suite::Cd,
        Suite::P2q,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Totaldisc => "totaldisc",
            Suite::Bounds => "bounds",
            Suite::Lemmas => "lemmas",
            Suite::Sym4 => "sym4",
            Suite::Construction => "construction",
            Suite::Cd => "cd",
            Suite::P2q => "p2q",
            Suite::All => "all",
        }
    }

    fn needs_corpus(&self) -> bool {
        !matches!(self, Suite::Sym4 | Suite::Construction)
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::INDIVIDUAL
            .iter()
            .chain(&[Suite::All])
            .copied()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    pub corpus: Corpus,
    pub order_cap: usize,
    pub lattice_cap: usize,
    pub construction_base: GroupSpec,
}

impl Default for VerifyOptions {
    fn default() -> VerifyOptions {
        VerifyOptions {
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            corpus: Corpus::default(),
            order_cap: crate::group::DEFAULT_ORDER_CAP,
            lattice_cap: crate::lattice::DEFAULT_LATTICE_CAP,
            construction_base: GroupSpec::Cyclic(3),
        }
    }
}

/// Runs one suite, or every suite in a fixed order for [`Suite::All`].
pub fn run(suite: Suite, opts: &VerifyOptions) -> Result<Vec<VerdictReport>> {
    let suites: Vec<Suite> = match suite {
        Suite::All => Suite::INDIVIDUAL.to_vec(),
        s => vec![s],
    };
    let data = if suites.iter().any(Suite::needs_corpus) {
        Some(CorpusData::build(&opts.corpus, opts.order_cap, opts.lattice_cap)?)
    } else {
        None
    };
    let corpus = || data.as_ref().expect("corpus built");
    suites
        .into_iter()
        .map(|s| match s {
            Suite::Totaldisc => Ok(verify_totaldisc(corpus(), opts.seed)),
            Suite::Bounds => Ok(verify_diameter_bounds(corpus(), opts.seed)),
            Suite::Lemmas => Ok(verify_lemma_suite(corpus(), opts.trials, opts.seed)),
            Suite::Sym4 => verify_sym4_geodesics(opts.seed),
            Suite::Construction => {
                verify_construction(&opts.construction_base, opts.order_cap, opts.lattice_cap, opts.seed)
            }
            Suite::Cd => Ok(verify_cd_inequality(corpus(), opts.seed)),
            Suite::P2q => verify_p2q(&P2Q_PRIMES, Some(corpus()), opts.order_cap, opts.lattice_cap, opts.seed),
            Suite::All => unreachable!(),
        })
        .collect()
}
