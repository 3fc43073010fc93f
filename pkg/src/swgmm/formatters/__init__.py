"""Formatters - Progresso e resumos no terminal."""
