"""netcomm: coauthorship networks, community detection, and independence
tests between communities and scholar attributes."""

__version__ = "0.1.0"

from ._accel import NUMBA_ENABLED, backend_name
from .chisq import (ChiSquareResult, ContingencyTable, chi_square_grid,
                    chi_square_statistic, contingency_table,
                    independence_report, monte_carlo_p)
from .community import (ALGORITHMS, Dendrogram, Partition, community_sizes,
                        detect, edge_betweenness_scores, girvan_newman,
                        leading_eigenvector, modularity, spinglass, walktrap)
from .errors import (ConnectivityError, ConvergenceError, EmptyTableError,
                     InputError, NetcommError, TableShapeError,
                     UndefinedStatisticError)
from .export import export_graph, graph_from_json, graph_to_json
from .graph import (Graph, connected_components, degrees, from_edge_list,
                    induced_subgraph, read_edge_tsv)
from .ingest import (CHARACTERISTICS, AttributeTable, PublicationRecord,
                     attribute_frequencies, build_coauthorship,
                     load_attributes, parse_publications)
from .layout import fruchterman_reingold
from .netstats import (NetStatsReport, connectedness, degree_exponent,
                       eigenvector_centrality, global_clustering,
                       maximal_cliques, summary)
from .svg import community_attribute_views, community_size_chart, render_svg
