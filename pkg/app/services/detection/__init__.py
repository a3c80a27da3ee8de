from app.services.detection.fast_greedy import fast_greedy
from app.services.detection.infomap import infomap, map_equation
from app.services.detection.louvain import louvain
from app.services.detection.markov_cluster import markov_cluster
from app.services.detection.modularity import modularity
from app.services.detection.walktrap import walktrap

__all__ = ["fast_greedy", "infomap", "louvain", "map_equation", "markov_cluster", "modularity", "walktrap"]
