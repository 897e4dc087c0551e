//! The special-function kernel: log-gamma, incomplete beta and its inverse.
//!
//!     cargo run --example special_functions

use binomial_ci::special::{beta_quantile, binomial_pmf, ln_gamma, log_beta, reg_inc_beta, std_normal_quantile};

fn main() -> binomial_ci::Result<()> {
    println!("ln Γ(10.5)          = {:.15}", ln_gamma(10.5));
    println!("ln B(4, 93)         = {:.15}", log_beta(4.0, 93.0)?);
    println!("I_0.3(4, 17)        = {:.15}", reg_inc_beta(0.3, 4.0, 17.0)?);

    // The Clopper-Pearson lower endpoint for 4 successes out of 96 is a beta quantile.
    let x = beta_quantile(0.025, 4.0, 93.0)?;
    println!(
        "B(0.025; 4, 93)     = {x:.12}  (I_x = {:.3e})",
        reg_inc_beta(x, 4.0, 93.0)?
    );

    // Binomial tail = incomplete beta.
    let tail: f64 = (4..=96).map(|k| binomial_pmf(96, k, x)).sum();
    println!("P(X >= 4 | p = x)   = {tail:.12}");

    println!("z_0.975             = {:.15}", std_normal_quantile(0.975)?);
    Ok(())
}
