"""Burst-based topic detection and precursor/laggard scoring.

The pipeline ingests a timestamped, pre-lemmatized blog-post corpus,
enumerates candidate n-grams, partitions each n-gram's occurrences into
temporal bursts, merges redundant bursts into topics, and estimates for
every ordered blog pair the probability that one blog enters shared topics
before the other beyond what their posting volumes explain.  Per-blog
precursor and laggard scores are then compared against link-structural
popularity metrics (in-degree, PageRank).
"""

from .corpus import (Corpus, CorpusError, EmptyCorpus, IngestConfig,
                     MalformedRecord, NonMonotonicWindow, Pos, Post, Token,
                     load_corpus, post_count)
from .ngrams import (Ngram, NgramConfig, Occurrence, build_index,
                     default_stopwords, enumerate_ngrams, load_stopwords)
from .bursts import (Burst, FilterConfig, NoSplit, burst_ratio, detect_bursts,
                     filter_bursts, inter_burst_mean, intra_burst_mean,
                     min_inter_interval, segment_bursts)
from .topics import Topic, is_generalization, merge_bursts
from .scoring import (DyadContext, DyadScore, ScoringConfig, TooLargeForExact,
                      chance_prob, gamma, global_scores, likelihood,
                      likelihood_sampled, omega, pr_h, score_all_dyads)
from .network import CitationGraph, build_graph, in_degree, pagerank
from .analysis import (ClassPartition, binned_summary, classify, corner_lists,
                       hexbin, significance_table, wilcoxon_rank_sum)
from .synth import GroundTruth, InfeasibleSpec, PlantedTopic, SynthSpec, generate

__version__ = "0.1.0"
