//! Special functions: gamma family, modified Bessel functions,
//! three-parameter Mittag-Leffler and Gauss hypergeometric.

pub mod bessel;
pub mod gamma;
pub mod hypergeometric;
pub mod mittag_leffler;

pub use bessel::{bessel_i, bessel_i_scaled, bessel_k, bessel_k_scaled};
pub use gamma::{erfc, gamma, ln_gamma, ln_gamma_signed, pochhammer, rgamma};
pub use hypergeometric::hyp2f1;
pub use mittag_leffler::{
    mittag_leffler3, mittag_leffler3_with, prabhakar_image, prabhakar_kernel, MlConfig, MlParams,
};
