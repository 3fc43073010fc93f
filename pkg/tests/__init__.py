"""Testes do swgmm."""
