use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("the modulus must be an odd prime, got 2")]
    EvenPrime,
    #[error("prime {0} is above the supported maximum of 251")]
    PrimeOutOfRange(u32),
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u8, u8),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("structure matrix {0} is not alternating")]
    NotAlternating(usize),
    #[error("{what}: {needed} items exceed the cap of {cap}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },
    #[error("a nonzero vector is required")]
    ZeroVector,
    #[error("operation needs derived rank {expected}, structure has {found}")]
    WrongDerivedRank { expected: usize, found: usize },
    #[error("glued derived images do not span the target space")]
    SpanDeficient,
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error("unknown catalog name {0:?}")]
    UnknownName(String),
    #[error("factor on {gens} generators with derived rank {rank} matches no catalogued indecomposable")]
    UnknownFactor { gens: usize, rank: usize },
}

pub(crate) fn budget_check(what: &'static str, needed: u128, cap: u128) -> Result<()> {
    if needed > cap {
        Err(Error::BudgetExceeded { what, needed, cap })
    } else {
        Ok(())
    }
}
