"""Infomorph workflows: typed DAG engine, content model, providers, and service."""

__version__ = "0.1.0"
