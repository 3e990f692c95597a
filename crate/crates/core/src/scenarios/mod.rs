//! End-to-end drivers: the Bott cochain and pairing, JLO relations on
//! nilpotent models, and the Gaussian Thom form with its Todd factor.

pub mod bott;
pub mod jlo;
pub mod thom;

pub use bott::{bott_pairing, bott_psi, BottResult};
pub use jlo::{jlo_cochains, jlo_corpus, jlo_verify, JloModel, JloModelSpec, JloReport};
pub use thom::{mq_supertrace, mq_verify, todd_det_series, MqResult, MqVerifyReport, ThomScenario};
