pub mod clifford;
pub mod error;
pub mod kreinlin;
pub mod linalg;
pub mod graphs;
pub mod spectral;
pub mod io;
pub mod wick;
pub mod canonical;
pub mod splitdirac;
pub mod generate;
pub mod fixtures;


#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/canonical.md")]
    mod canonical {}
    #[doc = include_str!("../../../book/src/wick.md")]
    mod wick {}
    #[doc = include_str!("../../../book/src/split.md")]
    mod split {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
