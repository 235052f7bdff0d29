/** Pan/zoom transform between world (layout units) and screen pixels. */

export interface ViewTransform {
  panX: number;
  panY: number;
  zoom: number;
}

export const MIN_ZOOM = 1e-3;
export const MAX_ZOOM = 1e3;

export function clampZoom(zoom: number): number {
  return Math.min(MAX_ZOOM, Math.max(MIN_ZOOM, zoom));
}

export function identityView(): ViewTransform {
  return { panX: 0, panY: 0, zoom: 1 };
}

export function worldToScreen(view: ViewTransform, x: number, y: number): [number, number] {
  return [x * view.zoom + view.panX, y * view.zoom + view.panY];
}

export function screenToWorld(view: ViewTransform, sx: number, sy: number): [number, number] {
  return [(sx - view.panX) / view.zoom, (sy - view.panY) / view.zoom];
}

/** Screen-space drag distance expressed in world units. */
export function dragDeltaWorld(view: ViewTransform, dxScreen: number, dyScreen: number): [number, number] {
  return [dxScreen / view.zoom, dyScreen / view.zoom];
}

/** Zoom by a factor keeping the given screen point fixed. */
export function zoomAt(view: ViewTransform, sx: number, sy: number, factor: number): ViewTransform {
  const zoom = clampZoom(view.zoom * factor);
  const applied = zoom / view.zoom;
  return {
    zoom,
    panX: sx - (sx - view.panX) * applied,
    panY: sy - (sy - view.panY) * applied,
  };
}

export function panBy(view: ViewTransform, dxScreen: number, dyScreen: number): ViewTransform {
  return { ...view, panX: view.panX + dxScreen, panY: view.panY + dyScreen };
}

/** Center the world bounding box in a width x height viewport. */
export function fitToContent(
  minX: number, minY: number, maxX: number, maxY: number,
  width: number, height: number, padding = 40,
): ViewTransform {
  const spanX = Math.max(maxX - minX, 1e-9);
  const spanY = Math.max(maxY - minY, 1e-9);
  const zoom = clampZoom(Math.min(
    (width - 2 * padding) / spanX,
    (height - 2 * padding) / spanY,
  ));
  const cx = (minX + maxX) / 2;
  const cy = (minY + maxY) / 2;
  return { zoom, panX: width / 2 - cx * zoom, panY: height / 2 - cy * zoom };
}
