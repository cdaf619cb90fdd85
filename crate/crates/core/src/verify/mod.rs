//! Brute-force oracles, seeded instances and the identity-check runner.

pub mod generate;
pub mod oracle;
pub mod report;
pub mod run;

pub use oracle::oracle_circumradius;
pub use report::{Check, Status, VerifyReport};
pub use run::{run_verify, run_verify_with};
