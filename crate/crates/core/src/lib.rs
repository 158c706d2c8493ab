pub mod atkin_lehner;
pub mod bezout;
pub mod classify;
pub mod cli;
pub mod eisenstein;
pub mod error;
pub mod factor;
pub mod order3;
pub mod qforms;
pub mod quaternion;
pub mod report;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/loeschian.md")]
    mod loeschian {}
    #[doc = include_str!("../../../book/src/bezout.md")]
    mod bezout {}
    #[doc = include_str!("../../../book/src/quaternions.md")]
    mod quaternions {}
    #[doc = include_str!("../../../book/src/atkin-lehner.md")]
    mod atkin_lehner {}
    #[doc = include_str!("../../../book/src/order3.md")]
    mod order3 {}
    #[doc = include_str!("../../../book/src/classes.md")]
    mod classes {}
    #[doc = include_str!("../../../book/src/sweep.md")]
    mod sweep {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
