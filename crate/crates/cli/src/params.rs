use clap::Args;
use qortho::quad::QuadratureSpec;
use qortho::verify::CheckConfig;
use qortho::{Complex64, QBase, QError, TruncationPolicy};

macro_rules! param_args {
    ($($name:literal => $re:ident, $im:ident;)*) => {
        /// Parameter assignments; complex values take a real and an imaginary flag.
        #[derive(Args, Debug, Clone, Default)]
        pub struct ParamArgs {
            /// Base q (real part)
            #[arg(long, allow_hyphen_values = true)]
            pub q: Option<f64>,
            /// Base q (imaginary part)
            #[arg(long, allow_hyphen_values = true)]
            pub q_im: Option<f64>,
            $(
                #[arg(long, allow_hyphen_values = true, help = concat!("Real part of ", $name))]
                pub $re: Option<f64>,
                #[arg(long, allow_hyphen_values = true, help = concat!("Imaginary part of ", $name))]
                pub $im: Option<f64>,
            )*
            /// First degree (or the only degree)
            #[arg(long)]
            pub m: Option<usize>,
            /// Second degree
            #[arg(long)]
            pub n: Option<usize>,
            /// Angle in radians
            #[arg(long, allow_hyphen_values = true)]
            pub theta: Option<f64>,
        }

        impl ParamArgs {
            fn given(&self, name: &str) -> Option<(Option<f64>, Option<f64>)> {
                match name {
                    "q" => Some((self.q, self.q_im)),
                    $($name => Some((self.$re, self.$im)),)*
                    _ => None,
                }
            }
        }
    };
}

param_args! {
    "alpha" => alpha_re, alpha_im;
    "beta" => beta_re, beta_im;
    "gamma" => gamma_re, gamma_im;
    "delta" => delta_re, delta_im;
    "a" => a_re, a_im;
    "b" => b_re, b_im;
    "c" => c_re, c_im;
    "d" => d_re, d_im;
    "s" => s_re, s_im;
    "t" => t_re, t_im;
    "x" => x_re, x_im;
    "y" => y_re, y_im;
    "z" => z_re, z_im;
}

impl ParamArgs {
    /// The named complex parameter, falling back to `default` when neither part is given.
    pub fn complex(&self, name: &str, default: f64) -> Complex64 {
        match self.given(name).expect("known parameter name") {
            (None, None) => Complex64::new(default, 0.0),
            (re, im) => Complex64::new(re.unwrap_or(0.0), im.unwrap_or(0.0)),
        }
    }

    pub fn base(&self, default: f64) -> Result<QBase, QError> {
        QBase::new(self.complex("q", default))
    }

    pub fn m_or(&self, default: usize) -> usize {
        self.m.unwrap_or(default)
    }

    pub fn n_or(&self, default: usize) -> usize {
        self.n.unwrap_or(default)
    }

    pub fn theta_or(&self, default: f64) -> f64 {
        self.theta.unwrap_or(default)
    }
}

/// Numerical settings shared by the subcommands.
#[derive(Args, Debug, Clone)]
pub struct NumericArgs {
    /// Pass/fail tolerance, overriding the identity's default
    #[arg(long)]
    pub tol: Option<f64>,
    /// Initial quadrature nodes
    #[arg(long, default_value_t = 256)]
    pub nodes: usize,
    /// Node cap for quadrature refinement
    #[arg(long, default_value_t = 8192)]
    pub max_nodes: usize,
    /// Maximum terms of any product or series
    #[arg(long, default_value_t = 10_000)]
    pub max_terms: usize,
    /// Relative truncation tolerance of products and series
    #[arg(long, default_value_t = 1e-14)]
    pub rel_tol: f64,
}

impl NumericArgs {
    pub fn policy(&self) -> Result<TruncationPolicy, QError> {
        TruncationPolicy::new(self.rel_tol, self.max_terms)
    }

    pub fn config(&self) -> Result<CheckConfig, QError> {
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(qortho::QError::Domain(format!(
                    "--tol must be positive, got {t}"
                )));
            }
        }
        Ok(CheckConfig {
            quad: QuadratureSpec::new(self.nodes, self.max_nodes, 1e-10)?,
            trunc: self.policy()?,
            tolerance: self.tol,
        })
    }
}
