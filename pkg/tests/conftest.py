"""Shared fixtures: a hand-checked customer warehouse pair.

The pair is built so that every merge stage has a known outcome:

* D1 (root Code) carries H1 = <Code, Department, Region, Continent> and
  H2 = <Code, Profession, Category>.
* D2 (root Code) carries H3 = <Code, City, Department, Country, Continent>
  and H4 = <Code, Profession, Subcategory>.
* The shared instances make exactly Region -> Country and
  Subcategory -> Category discoverable, while every cross-hierarchy pair
  (for example Department -> Category) is contradicted somewhere, so the
  merge produces H1_H3 = <Code, City, Department, Region, Country,
  Continent> and H2_H4 = <Code, Profession, Subcategory, Category> and
  nothing else.
* Completion fills C09.Region from C07, and C03 (null City) keeps its null
  Country because the City level can never be completed.
"""

from __future__ import annotations

import pytest

from dwmerge.model import Dimension, Hierarchy

H13_PARAMS = ("Code", "City", "Department", "Region", "Country", "Continent")
H24_PARAMS = ("Code", "Profession", "Subcategory", "Category")


def make_dimension(name, root, attributes, hierarchies, rows) -> Dimension:
    table = {}
    for values in rows:
        row = dict(zip(attributes, values))
        table[row[root]] = row
    return Dimension(name, root, tuple(attributes),
                     tuple(Hierarchy(n, tuple(p)) for n, p in hierarchies), table)


def customer_left() -> Dimension:
    attrs = ("Code", "Department", "Region", "Continent", "Profession", "Category")
    rows = [
        ("C01", "dept_a", "reg_1", "europe", "prof_a", "cat_a"),
        ("C02", "dept_a", "reg_1", "europe", "prof_a", "cat_a"),
        ("C03", "dept_a", "reg_1", "europe", "prof_a", "cat_a"),
        ("C04", "dept_c", "reg_3", "europe", "prof_b", "cat_b"),
        ("C05", "dept_c", "reg_3", "europe", "prof_b", "cat_b"),
        ("C06", "dept_a", "reg_1", "europe", "prof_e", "cat_b"),
        ("C07", "dept_b", "reg_2", "europe", "prof_d", "cat_b"),
        ("C10", "dept_d", "reg_4", "america", "prof_a", "cat_a"),
        ("C11", "dept_e", "reg_4", "america", "prof_b", "cat_b"),
        ("C12", "dept_a", "reg_1", "europe", "prof_a", "cat_a"),
    ]
    return make_dimension(
        "customer", "Code", attrs,
        [("H1", ("Code", "Department", "Region", "Continent")),
         ("H2", ("Code", "Profession", "Category"))],
        rows)


def customer_right(include_stub: bool = False) -> Dimension:
    attrs = ("Code", "City", "Department", "Country", "Continent",
             "Profession", "Subcategory")
    rows = [
        ("C01", "city_1", "dept_a", "france", "europe", "prof_a", "sub_a"),
        ("C05", "city_5", "dept_c", "uk", "europe", "prof_b", "sub_b"),
        ("C06", "city_1", "dept_a", "france", "europe", "prof_e", "sub_c"),
        ("C07", "city_7", "dept_b", "france", "europe", "prof_d", "sub_b"),
        ("C08", "city_8", "dept_a", "france", "europe", "prof_a", "sub_a"),
        ("C09", "city_9", "dept_b", "france", "europe", "prof_b", "sub_b"),
        ("C10", "city_10", "dept_d", "us", "america", "prof_a", "sub_a"),
        ("C11", "city_11", "dept_e", "us", "america", "prof_b", "sub_b"),
        ("C12", "city_12", "dept_a", "france", "europe", "prof_a", "sub_a"),
    ]
    if include_stub:
        # Conforms to H4 but its Category can never be completed.
        rows.append(("C13", "city_13", "dept_a", "france", "europe",
                     "prof_z", "sub_z"))
    return make_dimension(
        "customer", "Code", attrs,
        [("H3", ("Code", "City", "Department", "Country", "Continent")),
         ("H4", ("Code", "Profession", "Subcategory"))],
        rows)


def location_dim() -> Dimension:
    """A City-rooted axis sharing Department and Continent with customer_left."""
    attrs = ("City", "Department", "Country", "Continent")
    rows = [
        ("city_1", "dept_a", "france", "europe"),
        ("city_5", "dept_c", "uk", "europe"),
        ("city_7", "dept_b", "france", "europe"),
        ("city_10", "dept_d", "us", "america"),
        ("city_11", "dept_e", "us", "america"),
    ]
    return make_dimension(
        "location", "City", attrs,
        [("H3", ("City", "Department", "Country", "Continent"))],
        rows)


@pytest.fixture
def d_left() -> Dimension:
    return customer_left()


@pytest.fixture
def d_right() -> Dimension:
    return customer_right()


@pytest.fixture
def d_location() -> Dimension:
    return location_dim()
