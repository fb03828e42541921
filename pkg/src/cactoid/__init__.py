"""Exact distance-matrix algebra for cactoid-type weighted digraphs."""

from .composition import graph_cof, graph_det, graph_inverse, graph_lambda, make_graph_bag
from .distance import block_distance_matrix, graph_distance_matrix, shortest_path_oracle
from .formulas import (ZeroCycleWeightError, block_alpha, block_beta, block_cof, block_det,
                       block_inverse, block_lambda, block_laplacian_like, make_block_bag,
                       verify_left_lapexp, verify_right_lapexp)
from .graph import (BlockShape, BlockWeights, CactoidGraph, CycleWeights, StructuralError,
                    WeightedBlock, assemble_graph, canonicalize_block, make_block,
                    single_block_graph, unit_block)
from .linalg import Matrix, SingularMatrixError, cofactor_sum, det, inverse, to_rational
from .undirected import UndirectedShape, classify_det, classify_with_oracle

__version__ = "0.1.0"
