"""Terrain and mesh file formats"""
