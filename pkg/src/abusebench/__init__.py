"""Experiment harness for binary abusive/threatening text classification.

Two classifier families over the same corpora: a from-scratch Newton
gradient-boosted tree model on fixed sentence embeddings, and a small
fine-tunable neural classifier trained with class-weighted binary
cross-entropy. Evaluation reports positive-class F1, macro F1 and
ROC-AUC, and the runner renders leaderboard tables, figures and
shared-task submission files.
"""

__version__ = "0.1.0"

from . import boosted, corpus, embeddings, errors, metrics, synthetic  # noqa: F401
