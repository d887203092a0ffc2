//! Zero-pattern digraph of a square matrix: edge `i -> j` iff `a_ij != 0`.

use super::DenseMatrix;

/// Strongly connected components of the zero-pattern digraph, in the order
/// Tarjan's algorithm completes them (reverse topological order).
pub fn strongly_connected_components(a: &DenseMatrix) -> Vec<Vec<usize>> {
    let n = a.n();
    let adjacency: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| a[(i, j)] != 0.0).collect())
        .collect();

    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::with_capacity(n);
    let mut components = Vec::new();
    let mut counter = 0;

    // Explicit call stack of (vertex, next edge position).
    let mut frames: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        frames.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
            if let Some(&w) = adjacency[v].get(*pos) {
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut component = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component.push(w);
                    if w == v {
                        break;
                    }
                }
                component.sort_unstable();
                components.push(component);
            }
        }
    }
    components
}

/// Whether the zero-pattern digraph is strongly connected. A 1×1 matrix is
/// irreducible regardless of its entry.
pub fn is_strongly_connected(a: &DenseMatrix) -> bool {
    a.n() == 1 || strongly_connected_components(a).len() == 1
}

/// A nonnegative matrix is nilpotent iff its digraph has no cycle: every
/// component is a single vertex without a self-loop.
pub fn pattern_is_acyclic(a: &DenseMatrix) -> bool {
    strongly_connected_components(a)
        .iter()
        .all(|c| c.len() == 1 && a[(c[0], c[0])] == 0.0)
}
