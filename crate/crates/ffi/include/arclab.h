#ifndef ARCLAB_H
#define ARCLAB_H

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ArclabStatus {
  ARCLAB_STATUS_OK = 0,
  ARCLAB_STATUS_NULL_POINTER = 1,
  ARCLAB_STATUS_INVALID_UTF8 = 2,
  ARCLAB_STATUS_PARSE = 3,
  ARCLAB_STATUS_AXIOM = 4,
  ARCLAB_STATUS_FIELD = 5,
  ARCLAB_STATUS_OUT_OF_RANGE = 6,
  ARCLAB_STATUS_INVALID_ARGUMENT = 7,
  ARCLAB_STATUS_INTERNAL = 8,
  ARCLAB_STATUS_PANIC = 9,
} ArclabStatus;

typedef enum ArclabFilter {
  ARCLAB_FILTER_ALL = 0,
  ARCLAB_FILTER_SUPERFIGURATIONS = 1,
  ARCLAB_FILTER_CONFIGURATIONS = 2,
} ArclabFilter;

/*
 An arc-counting formula `C_n`.
 */
typedef struct ArclabFormula ArclabFormula;

/*
 A validated projective plane.
 */
typedef struct ArclabPlane ArclabPlane;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *arclab_last_error(void);

/*
 Library version as a static string.
 */
const char *arclab_version(void);

/*
 # Safety
 `s` must come from this library and not have been freed.
 */
void arclab_string_free(char *s);

/*
 The Desarguesian plane PG(2, q).

 # Safety
 `out` must be a valid pointer to write the handle to.
 */
enum ArclabStatus arclab_plane_pg2(uint64_t q, struct ArclabPlane **out);

/*
 Parse and validate a plane in the plane file format.

 # Safety
 `text` must be a nul-terminated string; `out` a valid pointer.
 */
enum ArclabStatus arclab_plane_parse(const char *text, struct ArclabPlane **out);

/*
 # Safety
 `plane` must be null or a handle from this library not yet freed.
 */
void arclab_plane_free(struct ArclabPlane *plane);

/*
 # Safety
 `plane` must be a live handle.
 */
uint32_t arclab_plane_order(const struct ArclabPlane *plane);

/*
 # Safety
 `plane` must be a live handle.
 */
size_t arclab_plane_num_points(const struct ArclabPlane *plane);

/*
 Ordered `n`-arcs of the plane, as a decimal string.

 # Safety
 `plane` must be a live handle; `out` a valid pointer.
 */
enum ArclabStatus arclab_count_arcs(const struct ArclabPlane *plane, size_t n, char **out);

/*
 Number of classes of linear spaces on `n` points passing `filter`.

 # Safety
 `out` must be a valid pointer.
 */
enum ArclabStatus arclab_enumerate_count(size_t n, enum ArclabFilter filter, size_t *out);

/*
 Derive `C_n`.

 # Safety
 `out` must be a valid pointer.
 */
enum ArclabStatus arclab_formula(size_t n, struct ArclabFormula **out);

/*
 # Safety
 `formula` must be null or a handle from this library not yet freed.
 */
void arclab_formula_free(struct ArclabFormula *formula);

/*
 The formula as JSON (base polynomial and per-class coefficients).

 # Safety
 `formula` must be a live handle; `out` a valid pointer.
 */
enum ArclabStatus arclab_formula_json(const struct ArclabFormula *formula, char **out);

/*
 The formula as plain text with class ids as symbol names.

 # Safety
 `formula` must be a live handle; `out` a valid pointer.
 */
enum ArclabStatus arclab_formula_text(const struct ArclabFormula *formula, char **out);

/*
 Number of superfiguration symbols in the formula.

 # Safety
 `formula` must be a live handle.
 */
size_t arclab_formula_num_terms(const struct ArclabFormula *formula);

/*
 Closed-form class count of a labeled superfiguration (`"7"`, `"8"`,
 `"9_3"` .. `"9_12"`) on PG(2, q), as a decimal string.

 # Safety
 `label` must be a nul-terminated string; `out` a valid pointer.
 */
enum ArclabStatus arclab_closed_form(const char *label, uint64_t q, char **out);

/*
 Ordered 9-arcs of PG(2, q) as a decimal string.

 # Safety
 `out` must be a valid pointer.
 */
enum ArclabStatus arclab_nine_arcs(uint64_t q, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ARCLAB_H */
