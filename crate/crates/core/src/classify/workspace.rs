use std::sync::Arc;

use parking_lot::Mutex;
use rustc_hash::FxHashMap;

use super::ClassifyError;
use crate::curvature::{self, DerivedKind};
use crate::geometry::{Metric, Symmetry, Tensor};

/// Tensor names understood by [`Workspace::tensor`].
pub const TENSOR_NAMES: [&str; 15] = ["g", "G", "R", "S", "C", "W", "K", "P", "Grot", "T", "Rop", "Sop", "SS", "gS", "gg"];

/// A metric together with a cache of the named tensors derived from it.
/// Cached values never outlive the metric, so a change of assumptions
/// means a new workspace.
pub struct Workspace<'m> {
    m: &'m Metric,
    cache: Mutex<FxHashMap<String, Arc<Tensor>>>,
}

impl<'m> Workspace<'m> {
    pub fn new(m: &'m Metric) -> Workspace<'m> {
        Workspace { m, cache: Mutex::new(FxHashMap::default()) }
    }

    pub fn metric(&self) -> &'m Metric {
        self.m
    }

    /// `g`/`G` metric, `R S C W K P` curvature tensors, `Grot` the Gaussian
    /// tensor, `T` stress-energy, `Rop` and `Sop` the (1,3) and (1,1)
    /// operators, `SS`, `gS`, `gg` Kulkarni–Nomizu products.
    pub fn tensor(&self, name: &str) -> Result<Arc<Tensor>, ClassifyError> {
        if let Some(t) = self.cache.lock().get(name) {
            return Ok(t.clone());
        }
        let m = self.m;
        let t = match name {
            "g" | "G" => m.g().clone(),
            "R" => m.riemann().clone(),
            "S" => m.ricci().clone(),
            "C" => curvature::derived(m, DerivedKind::Conformal),
            "W" => curvature::derived(m, DerivedKind::Concircular),
            "K" => curvature::derived(m, DerivedKind::Conharmonic),
            "P" => curvature::derived(m, DerivedKind::Projective),
            "Grot" => curvature::derived(m, DerivedKind::Gaussian),
            "T" => curvature::energy_momentum(m)?,
            "Rop" => m.riemann_operator(),
            "Sop" => m.raise(m.ricci(), 2)?,
            "SS" => self.wedge("S", "S")?,
            "gS" => self.wedge("g", "S")?,
            "gg" => self.wedge("g", "g")?,
            other => return Err(ClassifyError::UnknownTensor(other.to_string())),
        };
        Ok(self.insert(name.to_string(), t))
    }

    fn wedge(&self, a: &str, b: &str) -> Result<Tensor, ClassifyError> {
        let t = curvature::kulkarni_nomizu(&*self.tensor(a)?, &*self.tensor(b)?)?;
        Ok(self.m.reduce_tensor(&t))
    }

    /// Covariant derivative of a named tensor.
    pub fn nabla(&self, name: &str) -> Result<Arc<Tensor>, ClassifyError> {
        let key = format!("nabla {name}");
        if let Some(t) = self.cache.lock().get(&key) {
            return Ok(t.clone());
        }
        let t = self.m.covariant_derivative(&*self.tensor(name)?);
        Ok(self.insert(key, t))
    }

    /// Whether the named tensor may act through `D·H`.
    pub fn acts(&self, name: &str) -> Result<bool, ClassifyError> {
        let t = self.tensor(name)?;
        Ok(t.is_covariant() && t.rank() == 4 && t.obeys(Symmetry::AntiFirstPair))
    }

    fn insert(&self, key: String, t: Tensor) -> Arc<Tensor> {
        self.cache.lock().entry(key).or_insert_with(|| Arc::new(t)).clone()
    }
}
