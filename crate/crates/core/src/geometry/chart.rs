use std::ops::Deref;

use crate::expr::Context;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("a chart needs at least 3 coordinates, found {0}")]
pub struct ChartError(pub usize);

/// Coordinate declarations of a chart of dimension at least 3. Derefs to
/// the underlying [`Context`].
#[derive(Debug, Clone)]
pub struct Chart {
    ctx: Context,
}

impl Chart {
    pub fn new(ctx: Context) -> Result<Chart, ChartError> {
        if ctx.dim() < 3 {
            return Err(ChartError(ctx.dim()));
        }
        Ok(Chart { ctx })
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }
}

impl Deref for Chart {
    type Target = Context;

    fn deref(&self) -> &Context {
        &self.ctx
    }
}
