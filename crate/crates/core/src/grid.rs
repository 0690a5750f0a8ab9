//! Cell-wise maps over parameter grids.
//!
//! Results always come back in cell order, so reports do not depend on
//! scheduling. With the `parallel` feature (default) cells run on the rayon
//! pool; without it they run in order on the calling thread.

/// Maps `f(index, cell)` over all cells with the configured strategy.
pub fn map_cells<T, R, F>(cells: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_cells_parallel(cells, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_cells_sequential(cells, f)
    }
}

pub fn map_cells_sequential<T, R, F>(cells: &[T], f: F) -> Vec<R>
where
    F: Fn(usize, &T) -> R,
{
    cells.iter().enumerate().map(|(i, c)| f(i, c)).collect()
}

#[cfg(feature = "parallel")]
pub fn map_cells_parallel<T, R, F>(cells: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    cells.par_iter().enumerate().map(|(i, c)| f(i, c)).collect()
}

/// Cartesian product of two axes, first axis outermost.
pub fn product2<A: Clone, B: Clone>(a: &[A], b: &[B]) -> Vec<(A, B)> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| (x.clone(), y.clone())))
        .collect()
}
