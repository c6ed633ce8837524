use crate::error::{Error, Result};
use crate::fuchs::{BoundaryCondition, BoundaryPoint, FuchsOp};
use crate::scalar::{Scalar, C64};

/// Fuchs operator on the cone over `[0, length]` with one boundary condition
/// at each endpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem<T> {
    pub name: String,
    pub op: FuchsOp<T>,
    pub length: T,
    pub left: BoundaryCondition<T>,
    pub right: BoundaryCondition<T>,
}

impl<T: Scalar> Problem<T> {
    pub fn new(
        name: impl Into<String>,
        op: FuchsOp<T>,
        length: T,
        left: BoundaryCondition<T>,
        right: BoundaryCondition<T>,
    ) -> Result<Self> {
        for bc in [&left, &right] {
            if bc.mu() != op.mu() || bc.m() != op.m() {
                return Err(Error::Shape(format!(
                    "boundary condition for order {} and rank {} attached to operator of order {} and rank {}",
                    bc.mu(),
                    bc.m(),
                    op.mu(),
                    op.m()
                )));
            }
        }
        Ok(Problem { name: name.into(), op, length, left, right })
    }

    pub fn point_left(&self) -> BoundaryPoint<T> {
        BoundaryPoint::Left
    }

    pub fn point_right(&self) -> BoundaryPoint<T> {
        BoundaryPoint::Right { length: self.length.clone() }
    }

    /// `(point, condition)` for both endpoints, left first.
    pub fn conditions(&self) -> [(BoundaryPoint<T>, &BoundaryCondition<T>); 2] {
        [(self.point_left(), &self.left), (self.point_right(), &self.right)]
    }

    pub fn n(&self) -> i64 {
        self.op.n()
    }

    pub fn mu(&self) -> usize {
        self.op.mu()
    }

    pub fn m(&self) -> usize {
        self.op.m()
    }

    /// Neither the operator nor the boundary conditions depend on `t` near the tip.
    pub fn is_t_independent(&self) -> bool {
        self.op.series().is_t_independent()
            && [&self.left, &self.right]
                .iter()
                .all(|bc| bc.block().iter().flatten().all(|s| s.is_t_independent()))
    }

    pub fn to_c64(&self) -> Problem<C64> {
        Problem {
            name: self.name.clone(),
            op: self.op.to_c64(),
            length: self.length.to_c64(),
            left: self.left.to_c64(),
            right: self.right.to_c64(),
        }
    }
}
