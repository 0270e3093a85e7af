use super::{
    composite_symbol, cosine_symbol, knapp_stein_symbol_with, sine_symbol, KnappSteinForm, SpectralSymbol,
    TransformKind,
};
use crate::error::{Error, Result};
use crate::param::{qi, Param};
use crate::rootsystem::{grassmannian_preset_with, multiplicity_convention, Field, RootSystemBC, Weight};

/// Everything a symbol kernel may need; unused fields are ignored.
#[derive(Debug, Clone)]
pub struct SymbolRequest {
    pub field: Field,
    pub n: usize,
    pub r: usize,
    pub nu: Param,
    pub m: Weight,
    /// Second rank for composite transforms; defaults to `r`.
    pub r_prime: Option<usize>,
    /// Radon eigenvalue for composite transforms; defaults to 1.
    pub radon: Option<f64>,
    /// Multiplicity convention name.
    pub convention: String,
}

impl SymbolRequest {
    pub fn new(field: Field, n: usize, r: usize, nu: Param, m: Weight) -> Self {
        SymbolRequest {
            field,
            n,
            r,
            nu,
            m,
            r_prime: None,
            radon: None,
            convention: "geometric".into(),
        }
    }

    pub fn root_system(&self) -> Result<RootSystemBC> {
        self.root_system_of_rank(self.r)
    }

    fn root_system_of_rank(&self, r: usize) -> Result<RootSystemBC> {
        let conv = multiplicity_convention(&self.convention)?;
        grassmannian_preset_with(conv.as_ref(), self.field, self.n, r)
    }
}

pub trait SymbolKernel: Send + Sync {
    fn name(&self) -> &'static str;
    fn kind(&self) -> TransformKind;
    fn evaluate(&self, req: &SymbolRequest) -> Result<SpectralSymbol>;
}

struct Cosine;
struct Sine;
struct KnappStein(KnappSteinForm);
struct Composite(TransformKind);

impl SymbolKernel for Cosine {
    fn name(&self) -> &'static str {
        "cosine"
    }

    fn kind(&self) -> TransformKind {
        TransformKind::Cosine
    }

    fn evaluate(&self, req: &SymbolRequest) -> Result<SpectralSymbol> {
        cosine_symbol(&req.root_system()?, &req.nu, &req.m)
    }
}

impl SymbolKernel for Sine {
    fn name(&self) -> &'static str {
        "sine"
    }

    fn kind(&self) -> TransformKind {
        TransformKind::Sine
    }

    fn evaluate(&self, req: &SymbolRequest) -> Result<SpectralSymbol> {
        sine_symbol(&req.root_system()?, &req.nu, &req.m)
    }
}

impl SymbolKernel for KnappStein {
    fn name(&self) -> &'static str {
        match self.0 {
            KnappSteinForm::Substituted => "knapp-stein",
            KnappSteinForm::Printed => "knapp-stein-printed",
        }
    }

    fn kind(&self) -> TransformKind {
        TransformKind::KnappStein
    }

    /// Reads `ν` and solves `ν = −(a/2)(r − 2t)` for `t`; needs `n = 2r`.
    fn evaluate(&self, req: &SymbolRequest) -> Result<SpectralSymbol> {
        if req.n != 2 * req.r {
            return Err(Error::InvalidParameter(format!(
                "the Knapp–Stein operator lives on G(2r, r); got n = {}, r = {}",
                req.n, req.r
            )));
        }
        let a = qi(req.field.a() as i64);
        let t = req.nu.mul_q(&(qi(1) / a)).add_q(&(qi(req.r as i64) / qi(2)));
        knapp_stein_symbol_with(self.0, req.field, req.r, &t, &req.m)
    }
}

impl SymbolKernel for Composite {
    fn name(&self) -> &'static str {
        self.0.name()
    }

    fn kind(&self) -> TransformKind {
        self.0
    }

    fn evaluate(&self, req: &SymbolRequest) -> Result<SpectralSymbol> {
        let rp = req.r_prime.unwrap_or(req.r);
        composite_symbol(
            req.radon.unwrap_or(1.0),
            &req.root_system()?,
            &req.root_system_of_rank(rp)?,
            &req.nu,
            &req.m,
            self.0,
        )
    }
}

pub fn symbol_kernels() -> Vec<Box<dyn SymbolKernel>> {
    vec![
        Box::new(Cosine),
        Box::new(Sine),
        Box::new(KnappStein(KnappSteinForm::Substituted)),
        Box::new(KnappStein(KnappSteinForm::Printed)),
        Box::new(Composite(TransformKind::CompositeCosine)),
        Box::new(Composite(TransformKind::CompositeSine)),
    ]
}

pub fn symbol_kernel(name: &str) -> Result<Box<dyn SymbolKernel>> {
    symbol_kernels()
        .into_iter()
        .find(|k| k.name() == name)
        .ok_or_else(|| Error::UnknownName {
            kind: "symbol kernel",
            name: name.to_string(),
        })
}
