/*
 * Flat C interface to the Sol core, for embedding in other runtimes (a
 * WebAssembly build driving a browser front end, FFI bindings, ...).
 *
 * Everything crosses the boundary as arrays of 64-bit floats. Layouts:
 *
 *   observer[12]  x, y, z, then the 3x3 frame row-major (q00 q01 q02 q10 ... q22).
 *                 Frame columns are the local axes pulled back to the origin;
 *                 the view looks along local -z.
 *   ray[6]        x, y, z, vx, vy, vz  (velocity in model coordinates)
 *   hit[10]       hit, object, t, x, y, z, steps, wrap_count, back_side, blowup
 *
 * Functions return SOLMARCH_OK or an error code; solmarch_last_error() gives
 * the message of the most recent failure on the calling thread.
 * See docs/embedding-abi.md. Bump SOLMARCH_ABI_VERSION on any layout change.
 */
#ifndef SOLMARCH_EMBED_H
#define SOLMARCH_EMBED_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define SOLMARCH_ABI_VERSION 1

#define SOLMARCH_OK 0
#define SOLMARCH_INVALID_ARGUMENT 1
#define SOLMARCH_FLOW_ERROR 2
#define SOLMARCH_INTERNAL_ERROR 3

#define SOLMARCH_OBSERVER_DOUBLES 12
#define SOLMARCH_RAY_DOUBLES 6
#define SOLMARCH_HIT_DOUBLES 10

typedef struct solmarch_scene solmarch_scene;

int solmarch_abi_version(void);
const char* solmarch_last_error(void);

/* Moves along the geodesic leaving in local_dir[3] at `speed` for time dt. */
int solmarch_observer_step(double* observer, const double* local_dir, double speed, double dt);

/* frame <- frame * rotation, rotation[9] row-major. */
int solmarch_rotate_observer(double* observer, const double* rotation);

/* Reduces the observer position into the fundamental domain; the frame is
 * unchanged. word[3] (n1, n2, n3) may be NULL. */
int solmarch_teleport(double* observer, long long* word);

solmarch_scene* solmarch_scene_preset(const char* name, double height);
solmarch_scene* solmarch_scene_json(const char* json_text);
void solmarch_scene_free(solmarch_scene* scene);

/* Fills out_rays[w*h*6] with the camera rays, row by row. */
int solmarch_camera_rays(const double* observer, double fov, int width, int height, double* out_rays);

/* Marches n rays with default parameters; out[n*10]. */
int solmarch_march_batch(const solmarch_scene* scene, const double* rays, size_t n, double* out);

/* Same bytes as the command-line renderer for this pose and resolution. */
int solmarch_render_rgb(const solmarch_scene* scene, const double* observer, double fov, int width, int height,
                        unsigned char* rgb);

#ifdef __cplusplus
}
#endif

#endif /* SOLMARCH_EMBED_H */
