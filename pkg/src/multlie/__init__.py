"""Schur and Bogomolov multipliers of finite multiplicative Lie algebras."""
